//! The `verify all` battery: one check per headline property of the build,
//! each returning a pass/fail with a short reason.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use staba2_core::braid::{compose, elements, ell_mod5, inverse, is_sph, reduce, Word};
use staba2_core::correspondence::{
    calibrate, charge_at, default_sweep_samples, lift_check, triangle_geometry,
    verify_correspondence, STD_CROSS, STD_STAR,
};
use staba2_core::exchange::{
    generate_ball, simple_tilt, standard_heart, translate, Quotient, Role, Side, TiltGen,
};
use staba2_core::lattice::{shift_matrix, twist_matrix, IntMat2, KClass};
use staba2_core::periods::{
    canonical_periods, continue_periods, monodromy, period_map, pf_residual, Form, BASEPOINT,
};
use staba2_core::stability::{chamber_descent, width, ProjectiveCharge};
use staba2_core::Config;
use std::f64::consts::PI;

type C64 = Complex64;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn w(s: &str) -> Word {
    s.parse().expect("fixed word literal")
}

fn check(x: bool, msg: &str) -> Result<(), String> {
    if x {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn exact_algebra(_cfg: &Config) -> Result<(), String> {
    let m_s = twist_matrix(KClass::S).matrix();
    let m_t = twist_matrix(KClass::T).matrix();
    check(
        m_s * m_t * m_s == m_t * m_s * m_t,
        "braid relation on matrices",
    )?;
    check((m_s * m_t).pow(3) == -IntMat2::IDENTITY, "(M_S M_T)^3 = -I")?;
    check(
        shift_matrix(1).matrix() == -IntMat2::IDENTITY,
        "shift matrix",
    )?;
    check(
        reduce(&w("S T S")) == reduce(&w("T S T")),
        "reduce(STS) = reduce(TST)",
    )?;
    let sigma3 = reduce(&Word::big_sigma().pow(3));
    let delta2 = reduce(&Word::big_delta().pow(2));
    check(
        sigma3 == delta2 && delta2 == reduce(&Word::shift(1)),
        "Sigma^3 = Delta^2 = [1]",
    )?;
    check(ell_mod5(elements::phi_s()) == 0, "ell(Phi_S) = 0")?;
    check(ell_mod5(elements::shift(1)) == 1, "ell([1]) = 1")?;
    check(ell_mod5(elements::big_sigma()) == 2, "ell(Sigma) = 2")?;
    check(ell_mod5(elements::big_delta()) == 3, "ell(Delta) = 3")?;
    check(is_sph(elements::shift(5)), "[5] in Sph")?;
    check(!is_sph(elements::shift(1)), "[1] not in Sph")?;
    Ok(())
}

fn exchange_graph(_cfg: &Config) -> Result<(), String> {
    let ball = generate_ball(4, Quotient::None).map_err(|e| e.to_string())?;
    for (i, v) in ball.vertices.iter().enumerate() {
        if v.depth < ball.radius {
            let n: std::collections::BTreeSet<usize> =
                ball.neighbors(i).into_iter().map(|(j, _)| j).collect();
            check(n.len() == 4, "interior vertex not 4-regular")?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let i = rng.gen_range(0..ball.vertices.len());
        let j = rng.gen_range(0..ball.vertices.len());
        let (h1, h2) = (&ball.vertices[i].heart, &ball.vertices[j].heart);
        let a = compose(h2.g, inverse(h1.g));
        let moved = translate(a, h1);
        check(
            moved.g == h2.g,
            "translate by quotient element misses target",
        )?;
        check(
            moved.t_role.class == a.k_matrix.apply(h1.t_role.class),
            "translated classes inconsistent",
        )?;
    }
    let sph = generate_ball(6, Quotient::Sph).map_err(|e| e.to_string())?;
    check(sph.vertices.len() == 5, "Sph quotient vertex count")?;
    for i in 0..5 {
        let n: std::collections::BTreeSet<usize> =
            sph.neighbors(i).into_iter().map(|(j, _)| j).collect();
        check(n.len() == 2, "Sph quotient not a cycle")?;
    }
    Ok(())
}

fn tilt_matrices(_cfg: &Config) -> Result<(), String> {
    let delta = TiltGen::Delta.element().k_matrix.matrix();
    let sigma = TiltGen::Sigma.element().k_matrix.matrix();
    check(delta == STD_CROSS, "Delta K-matrix")?;
    check(sigma == STD_STAR, "Sigma K-matrix")?;
    Ok(())
}

fn periods(cfg: &Config) -> Result<(), String> {
    let pv = canonical_periods(c(0.5, 0.0), cfg).map_err(|e| e.to_string())?;
    let i = c(0.0, 1.0);
    for r in [pv.lambda.ratio(), pv.omega.ratio()] {
        check(
            (r - i).norm() < 1e-8 || (r + i).norm() < 1e-8,
            "ratio at 1/2 not +-i",
        )?;
    }
    let mut hi = cfg.clone();
    hi.quadrature_nodes = cfg.quadrature_nodes * 2;
    let a = canonical_periods(BASEPOINT, cfg).map_err(|e| e.to_string())?;
    let b = canonical_periods(BASEPOINT, &hi).map_err(|e| e.to_string())?;
    for (x, y) in [
        (a.lambda.alpha, b.lambda.alpha),
        (a.lambda.beta, b.lambda.beta),
        (a.omega.alpha, b.omega.alpha),
        (a.omega.beta, b.omega.beta),
    ] {
        check(
            (x - y).norm() / y.norm() < 1e-10,
            "quadrature self-convergence",
        )?;
    }
    let h = 1e-5;
    let mut ratios: Vec<C64> = Vec::new();
    for k in 0..10 {
        let u = c(-0.8 + 0.35 * k as f64, 0.7 + 0.04 * k as f64);
        let pv = period_map(u, cfg).map_err(|e| e.to_string())?;
        let up = continue_periods(&pv, &[u + h], cfg).map_err(|e| e.to_string())?;
        let um = continue_periods(&pv, &[u - h], cfg).map_err(|e| e.to_string())?;
        ratios.push((up.lambda.alpha - um.lambda.alpha) / (2.0 * h) / pv.omega.alpha);
        ratios.push((up.lambda.beta - um.lambda.beta) / (2.0 * h) / pv.omega.beta);
    }
    let first = ratios[0];
    for r in &ratios {
        check(
            (r - first).norm() / first.norm() < 1e-5,
            "derivative constant drifts",
        )?;
    }
    Ok(())
}

fn picard_fuchs(cfg: &Config) -> Result<(), String> {
    for k in 0..20 {
        let th = 0.15 + 0.085 * k as f64;
        let u = c(0.5, 0.0) + C64::from_polar(0.9, th);
        for form in [Form::Omega, Form::Lambda] {
            let res = pf_residual(u, form, cfg).map_err(|e| e.to_string())?;
            check(res < 1e-5, &format!("PF residual {res:.2e} at u={u}"))?;
        }
    }
    Ok(())
}

fn monodromy_and_calibration(cfg: &Config) -> Result<(), String> {
    let loop_zero = [
        BASEPOINT,
        c(-0.5, 0.5),
        c(-0.5, -0.5),
        c(0.5, -0.5),
        BASEPOINT,
    ];
    let loop_one = [
        BASEPOINT,
        c(0.5, -0.5),
        c(1.5, -0.5),
        c(1.5, 0.5),
        BASEPOINT,
    ];
    for l in [&loop_zero[..], &loop_one[..]] {
        let m = monodromy(l, cfg).map_err(|e| e.to_string())?;
        check(m.det() == 1, "monodromy not unimodular")?;
        check(m.trace().abs() == 2, "monodromy trace not +-2")?;
        check(
            m != IntMat2::IDENTITY && m != -IntMat2::IDENTITY,
            "monodromy trivial",
        )?;
    }
    let loop_inf = [
        BASEPOINT,
        c(-1.5, 1.0),
        c(-1.5, -1.0),
        c(2.5, -1.0),
        c(2.5, 1.0),
        BASEPOINT,
    ];
    let m = monodromy(&loop_inf, cfg).map_err(|e| e.to_string())?;
    check(
        m.pow(3) == -IntMat2::IDENTITY && m.pow(6) == IntMat2::IDENTITY,
        "infinity loop not order 6",
    )?;
    let cal = calibrate(cfg).map_err(|e| e.to_string())?;
    let b = cal.basis;
    let binv = b.inverse().ok_or("calibration basis not unimodular")?;
    let mc = if cal.cross_inverted {
        cal.measured_cross.inverse().ok_or("cross not invertible")?
    } else {
        cal.measured_cross
    };
    let ms = if cal.star_inverted {
        cal.measured_star.inverse().ok_or("star not invertible")?
    } else {
        cal.measured_star
    };
    let pe = |x: IntMat2, y: IntMat2| x == y || x == -y;
    check(pe(b * mc * binv, STD_CROSS), "calibrated cross monodromy")?;
    check(pe(b * ms * binv, STD_STAR), "calibrated star monodromy")?;
    Ok(())
}

fn chamber_structure(cfg: &Config) -> Result<(), String> {
    let cal = calibrate(cfg).map_err(|e| e.to_string())?;
    let a0 = standard_heart();
    let z = charge_at(c(0.5, 0.0), &cal, cfg).map_err(|e| e.to_string())?;
    let w0 = width(&z, &a0).map_err(|e| e.to_string())?;
    check(
        (w0 - 0.5).abs() < 1e-6,
        &format!("width at cross image {w0}"),
    )?;
    let zw = ProjectiveCharge::new(c(-0.25, 1.0), c(0.5, 0.0));
    let r_t = simple_tilt(&a0, Role::TRole, Side::Right);
    let wa = width(&zw, &a0).map_err(|e| e.to_string())?;
    let wb = width(&zw, &r_t).map_err(|e| e.to_string())?;
    check((wa - wb).abs() < 1e-9, &format!("wall widths {wa} vs {wb}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let zs = C64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.05..PI - 0.05));
        let zt = C64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(0.05..PI - 0.05));
        let rep = chamber_descent(&ProjectiveCharge::new(zs, zt))
            .map_err(|e| format!("descent failed: {e}"))?;
        check(rep.steps <= 64, "descent exceeded step cap")?;
    }
    Ok(())
}

fn correspondence_sweep(cfg: &Config) -> Result<(), String> {
    let cal = calibrate(cfg).map_err(|e| e.to_string())?;
    let report =
        verify_correspondence(&default_sweep_samples(), &cal, cfg).map_err(|e| e.to_string())?;
    check(
        report.pass_fraction() >= 0.95,
        &format!(
            "pass fraction {:.3} ({} passed, {} failed, {} excluded)",
            report.pass_fraction(),
            report.passed,
            report.failed,
            report.excluded
        ),
    )?;
    check(report.injectivity_ok, "local injectivity")?;
    let tri = triangle_geometry(cfg).map_err(|e| e.to_string())?;
    check(
        (tri.circ - PI).abs() < 0.1,
        &format!("circ angle {:.4}", tri.circ),
    )?;
    check(
        (tri.star - PI / 3.0).abs() < 0.05,
        &format!("star angle {:.4}", tri.star),
    )?;
    check(
        (tri.cross - PI / 2.0).abs() < 0.05,
        &format!("cross angle {:.4}", tri.cross),
    )?;
    Ok(())
}

fn lift(cfg: &Config) -> Result<(), String> {
    let report = lift_check(&[BASEPOINT], cfg).map_err(|e| e.to_string())?;
    let scalar = report.scalar.ok_or("trivial loop: no scalar")?;
    check(
        report.scalar_ok && (scalar - 1.0).norm() < 1e-6,
        "trivial loop scalar",
    )?;
    let zero = [c(-0.5, 0.5), c(-0.5, -0.5), c(0.5, -0.5), BASEPOINT];
    let one = [c(0.5, -0.5), c(1.5, -0.5), c(1.5, 0.5), BASEPOINT];
    let mut path = Vec::new();
    for _ in 0..3 {
        path.extend_from_slice(&zero);
        path.extend_from_slice(&one);
    }
    let report = lift_check(&path, cfg).map_err(|e| e.to_string())?;
    check(
        report.projectively_trivial,
        "central loop not projectively trivial",
    )?;
    let scalar = report.scalar.ok_or("central loop: no scalar")?;
    check(
        report.scalar_ok && (scalar + 1.0).norm() < 1e-6,
        &format!("central loop scalar {scalar}"),
    )?;
    Ok(())
}

type Check = fn(&Config) -> Result<(), String>;

/// Runs every check against the given configuration.
pub fn run_all(cfg: &Config) -> Vec<CheckResult> {
    let checks: Vec<(&str, Check)> = vec![
        ("exact-algebra", exact_algebra),
        ("exchange-graph", exchange_graph),
        ("tilt-matrices", tilt_matrices),
        ("periods", periods),
        ("picard-fuchs", picard_fuchs),
        ("monodromy-calibration", monodromy_and_calibration),
        ("chamber-structure", chamber_structure),
        ("correspondence-sweep", correspondence_sweep),
        ("lift", lift),
    ];
    checks
        .into_iter()
        .map(|(name, f)| match f(cfg) {
            Ok(()) => CheckResult {
                name: name.to_string(),
                passed: true,
                detail: "ok".to_string(),
            },
            Err(e) => CheckResult {
                name: name.to_string(),
                passed: false,
                detail: e,
            },
        })
        .collect()
}
