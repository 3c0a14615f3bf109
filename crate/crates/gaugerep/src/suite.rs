//! Named verification suites: typeS, cocycle, energy, gaussian, localnet,
//! modular, all.
//!
//! Every check records a residual and its threshold; bound-type checks
//! (a quantity that must clear a floor) record `floor − measured` with
//! threshold 0, so negative residuals show the margin. All randomness is
//! drawn from ChaCha streams derived from the configured seed, so a fixed
//! config yields byte-identical records.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{
    beta, coboundary, coboundary_fit, ergodic_limit, fixed_projection, v_apply, Cocycle,
    CocycleSamples,
};
use crate::config::SuiteConfig;
use crate::error::{Error, Result};
use crate::fock::{
    cinner, coh_inner, default_grid, energy_rep, exp_inner, gram_rank, op_equal, random_hvec,
    random_types, term_residual, types_apply, types_compose, types_inverse, CoherentVec, TypeS,
};
use crate::gaussian::{
    l2_inner, mc_mean, theta, theta_pairing, transformed_apply, GaussianSpace, ThetaFunctional,
};
use crate::lattice::{
    bump_algebra_field, h_dim, jet_from_algebra_field, jet_mul, jet_pow, random_jet_in_region,
    AlgebraField, GaugeJet, Region, SampledManifold,
};
use crate::lie::{cartan_root_decompose, su_basis, AlgebraElement};
use crate::localnet::{
    ao_prime_element, commutant_constraints, conjugate_types, locality_check,
    near_identity_factorization, plane_rotation, region_indices, root_constraint_check,
    separating_kernel, tensor_factorize, totality_rank, vacuum_cyclicity_gap, LocalGeneratorSet,
    TotalityMode,
};
use crate::modular::{
    canonical_involution, is_standard, lattice_suite, projector_distance, second_quantized_s_check,
    symplectic_complement, RealSubspace,
};
use crate::report::{CheckResult, ReportFormat, SuiteReport};
use crate::{CVec, RMat, RVec};

const SUITE_NAMES: [&str; 6] = ["typeS", "cocycle", "energy", "gaussian", "localnet", "modular"];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Scale factor keeping cocycle norms inside the coherent-vector cap on
/// larger-than-default instances (exactly 1.0 at the default scale).
fn fock_scale(mani: &SampledManifold, n: usize) -> f64 {
    (96.0 / h_dim(mani, n) as f64).sqrt().min(1.0)
}

fn rng_for(cfg: &SuiteConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
}

/// Runs one check, turning internal errors into failing results.
fn run_check<F>(report: &mut SuiteReport, cfg: &SuiteConfig, name: &str, default_tol: f64, f: F)
where
    F: FnOnce() -> Result<f64>,
{
    let tol = cfg.tol(name, default_tol);
    let start = Instant::now();
    let residual = match f() {
        Ok(r) => r,
        Err(_) => f64::INFINITY,
    };
    let wall = start.elapsed().as_secs_f64() * 1e3;
    report.push(CheckResult::new(name, residual, tol, wall));
}

/// Runs a named suite (or `all`) against a configuration.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match name {
        "typeS" => type_s_suite(cfg),
        "cocycle" => cocycle_suite(cfg),
        "energy" => energy_suite(cfg),
        "gaussian" => gaussian_suite(cfg),
        "localnet" => localnet_suite(cfg),
        "modular" => modular_suite(cfg),
        "all" => {
            let mut report = SuiteReport::new("all", &cfg.summary());
            for s in SUITE_NAMES {
                report.merge(run_suite(s, cfg)?);
            }
            Ok(report)
        }
        _ => Err(Error::Config {
            line: 0,
            message: format!(
                "unknown suite '{name}' (expected one of typeS, cocycle, energy, gaussian, localnet, modular, all)"
            ),
        }),
    }
}

/// Renders a suite report in the requested format.
pub fn emit_report(report: &SuiteReport, format: ReportFormat) -> String {
    report.render(format)
}

// ---------------------------------------------------------------- typeS --

fn type_s_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("typeS", &cfg.summary());
    let mani = cfg.manifold()?;
    let dim = h_dim(&mani, cfg.group);
    let triples = if dim <= 128 { 100 } else { 24 };

    run_check(&mut report, cfg, "compose_vs_apply", 1e-10, || {
        let mut r = rng_for(cfg, 0x7501);
        let mut worst = 0.0_f64;
        for _ in 0..triples {
            let u1 = random_types(dim, 0.9, &mut r);
            let u2 = random_types(dim, 0.9, &mut r);
            let v = CoherentVec::exp_vector(random_hvec(dim, 1.0, &mut r))?;
            let once = types_apply(&types_compose(&u1, &u2)?, &v)?;
            let twice = types_apply(&u1, &types_apply(&u2, &v)?)?;
            worst = worst.max(term_residual(&once, &twice)?);
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "associativity", 1e-10, || {
        let mut r = rng_for(cfg, 0x7502);
        let mut worst = 0.0_f64;
        for _ in 0..triples {
            let u1 = random_types(dim, 0.9, &mut r);
            let u2 = random_types(dim, 0.9, &mut r);
            let u3 = random_types(dim, 0.9, &mut r);
            let lhs = types_compose(&types_compose(&u1, &u2)?, &u3)?;
            let rhs = types_compose(&u1, &types_compose(&u2, &u3)?)?;
            worst = worst.max(lhs.distance(&rhs));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "unitarity_pairing", 1e-10, || {
        let mut r = rng_for(cfg, 0x7503);
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let u = random_types(dim, 1.0, &mut r);
            let v = CoherentVec::exp_vector(random_hvec(dim, 1.0, &mut r))?;
            let w = CoherentVec::exp_vector(random_hvec(dim, 1.0, &mut r))?;
            let lhs = coh_inner(&types_apply(&u, &v)?, &types_apply(&u, &w)?)?;
            let rhs = coh_inner(&v, &w)?;
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "inverse_round_trip", 1e-10, || {
        let mut r = rng_for(cfg, 0x7504);
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let u = random_types(dim, 1.0, &mut r);
            let prod = types_compose(&u, &types_inverse(&u))?;
            worst = worst.max(prod.distance(&TypeS::identity(dim)));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "exponential_independence", 0.5, || {
        let mut r = rng_for(cfg, 0x7505);
        let vecs: Vec<CVec> = (0..8).map(|_| random_hvec(dim, 1.2, &mut r)).collect();
        let rank = gram_rank(&vecs, 1e-10)?;
        Ok((8 - rank) as f64)
    });

    Ok(report)
}

// -------------------------------------------------------------- cocycle --

fn random_jets(
    mani: &SampledManifold,
    n: usize,
    count: usize,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<GaugeJet>> {
    let total = mani.sites();
    (0..count)
        .map(|k| {
            // vary the supports across the samples
            let a = k % total;
            let b = a + total / 2 + (k % (total / 2)).min(total - 1 - a);
            let region = Region::new(a..=b.min(total - 1), total)?;
            random_jet_in_region(mani, n, &region, scale, rng)
        })
        .collect()
}

fn cartan_bump(mani: &SampledManifold, n: usize, center: usize, radius: f64, amp: f64) -> Result<AlgebraField> {
    let basis = su_basis(n)?;
    let dir = basis.elems[basis.cartan_idx[0]].scale(amp);
    bump_algebra_field(mani, center, radius, &dir)
}

fn cocycle_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cocycle", &cfg.summary());
    let mani = cfg.manifold()?;
    let n = cfg.group;

    run_check(&mut report, cfg, "cocycle_identity", 1e-12, || {
        let mut r = rng_for(cfg, 0xC001);
        let jets = random_jets(&mani, n, 200, 0.9, &mut r)?;
        let mut worst = 0.0_f64;
        for pair in jets.chunks(2) {
            let (p1, p2) = (&pair[0], &pair[1]);
            let lhs = beta(&jet_mul(p1, p2)?);
            let rhs = beta(p1).add(&v_apply(p1, &beta(p2))?)?;
            worst = worst.max(lhs.sub(&rhs)?.norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "cocycle_identity_torus", 1e-12, || {
        let torus = SampledManifold::torus(8, 8)?;
        let mut r = rng_for(cfg, 0xC002);
        let jets = random_jets(&torus, n, 50, 0.9, &mut r)?;
        let mut worst = 0.0_f64;
        for pair in jets.chunks(2) {
            let (p1, p2) = (&pair[0], &pair[1]);
            let lhs = beta(&jet_mul(p1, p2)?);
            let rhs = beta(p1).add(&v_apply(p1, &beta(p2))?)?;
            worst = worst.max(lhs.sub(&rhs)?.norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "dexp_finite_difference", 1e-6, || {
        let mut r = rng_for(cfg, 0xC003);
        let h = 1e-5;
        let mut worst = 0.0_f64;
        for _ in 0..50 {
            let phi = AlgebraElement::random(2, 1.0, &mut r)?;
            let delta = AlgebraElement::random(2, 1.0, &mut r)?;
            let gp = crate::lie::alg_exp(&phi.add(&delta.scale(h)));
            let gm = crate::lie::alg_exp(&phi.add(&delta.scale(-h)));
            let gi = crate::lie::alg_exp(&phi.scale(-1.0));
            let fd = (gp.matrix() - gm.matrix()) * c(1.0 / (2.0 * h), 0.0) * gi.matrix();
            let out = crate::lie::dexp_right(&phi, &delta);
            worst = worst.max((out.matrix() - &fd).norm() / out.matrix().norm().max(1e-12));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "dexp_abelian_exact", 1e-12, || {
        let f = cartan_bump(&mani, n, 2, 1.3, 1.1)?;
        let psi = jet_from_algebra_field(&f, 1.0);
        Ok(beta(&psi).sub(&f.differential())?.norm())
    });

    run_check(&mut report, cfg, "support_localization", 0.5, || {
        let mut r = rng_for(cfg, 0xC004);
        let jets = random_jets(&mani, n, 20, 0.9, &mut r)?;
        let samples = CocycleSamples::from_cocycle(&Cocycle::MaurerCartan, &jets)?;
        let mut violations = 0usize;
        if !samples.supports_localized() {
            violations += 1;
        }
        // Prop 3.1(2): jets agreeing on a region have equal β there
        let base = AlgebraField::random_in_region(&mani, n, &Region::all(mani.sites()), 0.8, &mut r)?;
        let half = mani.sites() / 2;
        let other = AlgebraField::random_in_region(
            &mani,
            n,
            &Region::new(half..mani.sites(), mani.sites())?,
            0.8,
            &mut r,
        )?;
        let mixed = AlgebraField::new(
            &mani,
            n,
            (0..mani.sites())
                .map(|s| {
                    if s < half {
                        base.value(s).clone()
                    } else {
                        other.value(s).clone()
                    }
                })
                .collect(),
            (0..mani.sites())
                .map(|s| {
                    (0..mani.tangent_dim())
                        .map(|mu| {
                            if s < half {
                                base.diff(s, mu).clone()
                            } else {
                                other.diff(s, mu).clone()
                            }
                        })
                        .collect()
                })
                .collect(),
        )?;
        let j1 = jet_from_algebra_field(&base, 1.0);
        let j2 = jet_from_algebra_field(&mixed, 1.0);
        for s in 0..half {
            for mu in 0..mani.tangent_dim() {
                if beta(&j1).component(s, mu) != beta(&j2).component(s, mu) {
                    violations += 1;
                }
            }
        }
        Ok(violations as f64)
    });

    run_check(&mut report, cfg, "ergodic_slope", 0.15, || {
        let mut r = rng_for(cfg, 0xC005);
        let reg = Region::new(0..(3 * mani.sites() / 4), mani.sites())?;
        let p1 = random_jet_in_region(&mani, n, &reg, 0.7, &mut r)?;
        let p2 = random_jet_in_region(&mani, n, &reg, 0.9, &mut r)?;
        let p3 = random_jet_in_region(&mani, n, &reg, 0.7, &mut r)?;
        let mut pts = Vec::new();
        let mut k = 8usize;
        while k <= 512 {
            let (first, second) = ergodic_limit(&Cocycle::MaurerCartan, &p1, &p2, &p3, k)?;
            pts.push(((k as f64).ln(), first.sub(&second)?.norm().ln()));
            k *= 2;
        }
        let nn = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        Ok((slope + 1.0).abs())
    });

    run_check(&mut report, cfg, "ergodic_psi3_independence", 1e-10, || {
        let mut r = rng_for(cfg, 0xC006);
        let reg = Region::new(0..(3 * mani.sites() / 4), mani.sites())?;
        let p1 = random_jet_in_region(&mani, n, &reg, 0.7, &mut r)?;
        let p2 = random_jet_in_region(&mani, n, &reg, 0.9, &mut r)?;
        let p3a = random_jet_in_region(&mani, n, &reg, 0.7, &mut r)?;
        let p3b = random_jet_in_region(&mani, n, &reg, 0.7, &mut r)?;
        let (_, la) = ergodic_limit(&Cocycle::MaurerCartan, &p1, &p2, &p3a, 32)?;
        let (_, lb) = ergodic_limit(&Cocycle::MaurerCartan, &p1, &p2, &p3b, 32)?;
        Ok(la.sub(&lb)?.norm())
    });

    run_check(&mut report, cfg, "ergodic_abelian_exact", 1e-12, || {
        let f = cartan_bump(&mani, n, mani.sites() / 3, 1.4, 0.9)?;
        let psi2 = jet_from_algebra_field(&f, 1.0);
        let e = GaugeJet::identity(&mani, n);
        let dphi = f.differential();
        let mut worst = 0.0_f64;
        for k in [1usize, 8, 33, 64] {
            let (first, _) = ergodic_limit(&Cocycle::MaurerCartan, &e, &psi2, &e, k)?;
            worst = worst.max(first.sub(&dphi)?.norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "coboundary_fit_exact", 1e-8, || {
        let mut r = rng_for(cfg, 0xC007);
        let v0 = AlgebraField::random_in_region(&mani, n, &Region::all(mani.sites()), 1.0, &mut r)?
            .differential();
        let jets = random_jets(&mani, n, 8, 0.9, &mut r)?;
        let samples = CocycleSamples::from_cocycle(&Cocycle::Coboundary(v0), &jets)?;
        let (_, residual) = coboundary_fit(&samples)?;
        Ok(residual)
    });

    run_check(&mut report, cfg, "coboundary_nontriviality", 0.0, || {
        let mut r = rng_for(cfg, 0xC008);
        let f = cartan_bump(&mani, n, mani.sites() / 4, 1.5, 1.0)?;
        let dphi_norm = f.differential().norm();
        let mut jets: Vec<GaugeJet> = (1..=4).map(|k| jet_from_algebra_field(&f, k as f64)).collect();
        jets.extend(random_jets(&mani, n, 4, 0.8, &mut r)?);
        let samples = CocycleSamples::from_cocycle(&Cocycle::MaurerCartan, &jets)?;
        let (_, residual) = coboundary_fit(&samples)?;
        // β must stay at least 0.5·‖dφ‖ away from every coboundary
        Ok(0.5 * dphi_norm - residual)
    });

    run_check(&mut report, cfg, "coboundary_power_bound", 1e-9, || {
        let mut r = rng_for(cfg, 0xC009);
        let v = AlgebraField::random_in_region(&mani, n, &Region::all(mani.sites()), 1.0, &mut r)?
            .differential();
        let psi = random_jet_in_region(&mani, n, &Region::all(mani.sites()), 0.9, &mut r)?;
        let mut worst = f64::NEG_INFINITY;
        for k in [1usize, 4, 16, 64] {
            let d = coboundary(&v, &jet_pow(&psi, k)?)?;
            worst = worst.max(d.norm() - 2.0 * v.norm());
        }
        Ok(worst.max(0.0))
    });

    Ok(report)
}

// --------------------------------------------------------------- energy --

fn energy_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("energy", &cfg.summary());
    let mani = cfg.manifold()?;
    let n = cfg.group;
    let dim = h_dim(&mani, n);
    let pairs = if dim <= 128 { 100 } else { 24 };

    run_check(&mut report, cfg, "homomorphism", 1e-10, || {
        let mut r = rng_for(cfg, 0xE001);
        let jets = random_jets(&mani, n, 2 * pairs, 0.9, &mut r)?;
        let mut worst = 0.0_f64;
        for pair in jets.chunks(2) {
            let (p1, p2) = (&pair[0], &pair[1]);
            let composed = types_compose(&energy_rep(p1), &energy_rep(p2))?;
            let direct = energy_rep(&jet_mul(p1, p2)?);
            worst = worst.max(composed.distance(&direct));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "homomorphism_phase_exact", 1e-14, || {
        let mut r = rng_for(cfg, 0xE002);
        let jets = random_jets(&mani, n, 2 * pairs, 0.9, &mut r)?;
        let mut worst = 0.0_f64;
        for pair in jets.chunks(2) {
            let composed = types_compose(&energy_rep(&pair[0]), &energy_rep(&pair[1]))?;
            worst = worst.max((composed.c() - c(1.0, 0.0)).norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "footnote_phase_im", 1e-14, || {
        let mut r = rng_for(cfg, 0xE003);
        let jets = random_jets(&mani, n, 40, 0.9, &mut r)?;
        let mut worst = 0.0_f64;
        for pair in jets.chunks(2) {
            let b1 = beta(&pair[0]).hvec();
            let vb2 = energy_rep(&pair[0]).a() * beta(&pair[1]).hvec();
            worst = worst.max(cinner(&vb2, &b1).im.abs());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "vacuum_action", 1e-12, || {
        let mut r = rng_for(cfg, 0xE004);
        let fs = fock_scale(&mani, n);
        let psi = random_jet_in_region(&mani, n, &Region::all(mani.sites()), 0.9 * fs, &mut r)?;
        let u = energy_rep(&psi);
        let out = types_apply(&u, &CoherentVec::vacuum(dim))?;
        let bn = beta(&psi).norm();
        let want = CoherentVec::new(vec![(c((-0.5 * bn * bn).exp(), 0.0), beta(&psi).hvec())])?;
        term_residual(&out, &want)
    });

    run_check(&mut report, cfg, "shift_intertwiner", 1e-10, || {
        let mut r = rng_for(cfg, 0xE005);
        let fs = fock_scale(&mani, n);
        let reg = Region::new(0..(2 * mani.sites() / 3), mani.sites())?;
        let psi = random_jet_in_region(&mani, n, &reg, 0.9 * fs, &mut r)?;
        let vfield =
            AlgebraField::random_in_region(&mani, n, &Region::all(mani.sites()), 0.8 * fs, &mut r)?
                .differential();
        let u = energy_rep(&psi);
        let shift = TypeS::shift(-vfield.hvec());
        let beta2 = beta(&psi).add(&coboundary(&vfield, &psi)?)?;
        let u2 = TypeS::new(u.a().clone(), beta2.hvec(), c(1.0, 0.0))?;
        let lhs = vec![(c(1.0, 0.0), types_compose(&shift, &u)?)];
        let rhs = vec![(c(1.0, 0.0), types_compose(&u2, &shift)?)];
        let grid = default_grid(dim, &[&u, &u2, &shift], 16, cfg.seed ^ 0xE006);
        op_equal(&lhs, &rhs, &grid)
    });

    run_check(&mut report, cfg, "fixed_projection_idempotent", 1e-10, || {
        let mut r = rng_for(cfg, 0xE007);
        let reg = Region::new(0..(mani.sites() / 2), mani.sites())?;
        let psi = random_jet_in_region(&mani, n, &reg, 0.9, &mut r)?;
        let p = fixed_projection(&psi);
        let _d = p.nrows();
        Ok(((&p * &p) - &p).norm() + (&p - p.transpose()).norm())
    });

    Ok(report)
}

// ------------------------------------------------------------- gaussian --

fn gaussian_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("gaussian", &cfg.summary());
    let mani = cfg.manifold()?;
    let n = cfg.group;
    let dim = h_dim(&mani, n);
    let space = GaussianSpace::identity(dim);

    let family: Vec<CVec> = {
        let mut r = rng_for(cfg, 0x6001);
        (0..8).map(|_| random_hvec(dim, 0.9, &mut r)).collect()
    };

    run_check(&mut report, cfg, "theta_pairing_family", 1e-10, || {
        let mut worst = 0.0_f64;
        for x in &family {
            for y in &family {
                let got = theta_pairing(&space, x, y)?;
                let want = exp_inner(y, x)?;
                worst = worst.max((got - want).norm() / (1.0 + want.norm()));
            }
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "theta_isometry", 1e-10, || {
        let mut worst = 0.0_f64;
        for x in &family {
            for y in &family {
                let fock = exp_inner(x, y)?;
                let tx = theta(&space, &CoherentVec::exp_vector(x.clone())?)?;
                let ty = theta(&space, &CoherentVec::exp_vector(y.clone())?)?;
                let l2 = l2_inner(&space, &tx, &ty)?;
                worst = worst.max((fock - l2).norm() / (1.0 + fock.norm()));
            }
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "intertwining", 1e-10, || {
        let mut r = rng_for(cfg, 0x6002);
        let fs = fock_scale(&mani, n);
        let reg = Region::new(0..(2 * mani.sites() / 3), mani.sites())?;
        let psi = random_jet_in_region(&mani, n, &reg, 0.9 * fs, &mut r)?;
        let u = energy_rep(&psi);
        let mut worst = 0.0_f64;
        for x in &family {
            let e = CoherentVec::exp_vector(x.clone())?;
            let via_fock = theta(&space, &types_apply(&u, &e)?)?;
            let via_measure = transformed_apply(&psi, &theta(&space, &e)?);
            worst = worst.max((via_fock.terms()[0].0 - via_measure.terms()[0].0).norm());
            worst = worst.max((&via_fock.terms()[0].1 - &via_measure.terms()[0].1).norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "transported_homomorphism", 1e-10, || {
        let mut r = rng_for(cfg, 0x6003);
        let fs = fock_scale(&mani, n);
        let reg = Region::new(0..(2 * mani.sites() / 3), mani.sites())?;
        let p1 = random_jet_in_region(&mani, n, &reg, 0.8 * fs, &mut r)?;
        let p2 = random_jet_in_region(&mani, n, &reg, 0.8 * fs, &mut r)?;
        let prod = jet_mul(&p1, &p2)?;
        let mut worst = 0.0_f64;
        for x in family.iter().take(4) {
            let phi = theta(&space, &CoherentVec::exp_vector(x.clone())?)?;
            let lhs = transformed_apply(&p1, &transformed_apply(&p2, &phi));
            let rhs = transformed_apply(&prod, &phi);
            worst = worst.max((lhs.terms()[0].0 - rhs.terms()[0].0).norm());
            worst = worst.max((&lhs.terms()[0].1 - &rhs.terms()[0].1).norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "mc_characteristic_4sigma", 0.0, || {
        let mut r = rng_for(cfg, 0x6004);
        let mut margin = f64::NEG_INFINITY;
        for k in 0..8 {
            let f = RVec::from_fn(dim, |_, _| {
                use rand::Rng;
                r.random::<f64>() * 0.4 - 0.2
            });
            let phi = ThetaFunctional::new(vec![(
                c(1.0, 0.0),
                CVec::from_fn(dim, |i, _| c(f[i], 0.0)),
            )]);
            let est = mc_mean(&space, &phi, cfg.mc_samples, cfg.seed ^ (0x6100 + k));
            let closed = space.characteristic(&f);
            let m_re = (est.mean.re - closed).abs() - 4.0 * est.se_re - 1e-12;
            let m_im = est.mean.im.abs() - 4.0 * est.se_im - 1e-12;
            margin = margin.max(m_re).max(m_im);
        }
        Ok(margin)
    });

    run_check(&mut report, cfg, "mc_pairing_4sigma", 0.0, || {
        // one shared sample stream feeds every pair estimate
        let thetas: Vec<ThetaFunctional> = family
            .iter()
            .map(|x| theta(&space, &CoherentVec::exp_vector(x.clone()).unwrap()).unwrap())
            .collect();
        let k = thetas.len();
        let mut sums = vec![c(0.0, 0.0); k * k];
        let mut sq_re = vec![0.0_f64; k * k];
        let mut sq_im = vec![0.0_f64; k * k];
        let mut r = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6200);
        let samples = cfg.mc_samples;
        for _ in 0..samples {
            let chi = space.sample(&mut r);
            let vals: Vec<Complex64> = thetas.iter().map(|t| t.eval(&chi)).collect();
            for i in 0..k {
                for j in i..k {
                    let v = vals[i].conj() * vals[j];
                    let idx = i * k + j;
                    sums[idx] += v;
                    sq_re[idx] += v.re * v.re;
                    sq_im[idx] += v.im * v.im;
                }
            }
        }
        let nn = samples as f64;
        let mut margin = f64::NEG_INFINITY;
        for i in 0..k {
            for j in i..k {
                let idx = i * k + j;
                let mean = sums[idx] / nn;
                let se_re = ((sq_re[idx] / nn - mean.re * mean.re).max(0.0) / nn).sqrt();
                let se_im = ((sq_im[idx] / nn - mean.im * mean.im).max(0.0) / nn).sqrt();
                // ∫ conj(θx_i)·θx_j dμ = theta_pairing(x_i, x_j)
                let closed = theta_pairing(&space, &family[i], &family[j])?;
                let m_re = (mean.re - closed.re).abs() - 4.0 * se_re - 1e-12;
                let m_im = (mean.im - closed.im).abs() - 4.0 * se_im - 1e-12;
                margin = margin.max(m_re).max(m_im);
            }
        }
        Ok(margin)
    });

    Ok(report)
}

// ------------------------------------------------------------- localnet --

fn localnet_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("localnet", &cfg.summary());
    let mani = cfg.manifold()?;
    let n = cfg.group;
    let region = cfg.parsed_region()?;
    if region.is_empty() || region.complement().is_empty() {
        return Err(Error::Config {
            line: 0,
            message: "localnet suite needs a proper nonempty region".into(),
        });
    }

    run_check(&mut report, cfg, "root_decompose_su2", 1e-10, || {
        Ok(cartan_root_decompose(2)?.max_bracket_residual())
    });
    run_check(&mut report, cfg, "root_decompose_su3", 1e-10, || {
        Ok(cartan_root_decompose(3)?.max_bracket_residual())
    });

    run_check(&mut report, cfg, "locality_disjoint", 1e-12, || {
        let mut r = rng_for(cfg, 0x1001);
        let total = mani.sites();
        let mut worst = 0.0_f64;
        for k in 0..20 {
            let cut = total / 2;
            let w = 2 + (k % (cut.saturating_sub(2)).max(1));
            let r1 = Region::new(0..w.min(cut), total)?;
            let r2 = Region::new(cut..(cut + w).min(total), total)?;
            let p1 = random_jet_in_region(&mani, n, &r1, 1.0, &mut r)?;
            let p2 = random_jet_in_region(&mani, n, &r2, 1.0, &mut r)?;
            worst = worst.max(locality_check(&p1, &p2)?);
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "locality_disjoint_torus", 1e-12, || {
        let torus = SampledManifold::torus(8, 8)?;
        let mut r = rng_for(cfg, 0x1002);
        let mut worst = 0.0_f64;
        for _ in 0..5 {
            let r1 = Region::new(0..16, 64)?;
            let r2 = Region::new(32..48, 64)?;
            let p1 = random_jet_in_region(&torus, n, &r1, 1.0, &mut r)?;
            let p2 = random_jet_in_region(&torus, n, &r2, 1.0, &mut r)?;
            worst = worst.max(locality_check(&p1, &p2)?);
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "locality_nonvacuous", 0.0, || {
        let basis = su_basis(n)?;
        let f1 = bump_algebra_field(&mani, 4, 1.5, &basis.elems[0].scale(1.0))?;
        let f2 = bump_algebra_field(&mani, 5, 1.5, &basis.elems[1].scale(1.0))?;
        let resid = locality_check(
            &jet_from_algebra_field(&f1, 1.0),
            &jet_from_algebra_field(&f2, 1.0),
        )?;
        Ok(1e-4 - resid)
    });

    run_check(&mut report, cfg, "conjugation_two_path", 1e-10, || {
        let mut r = rng_for(cfg, 0x1003);
        let dim = h_dim(&mani, n);
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let psi = random_jet_in_region(&mani, n, &region, 0.9, &mut r)?;
            let u = random_types(dim, 0.8, &mut r);
            let (formula, _) = conjugate_types(&psi, &u)?;
            let urep = energy_rep(&psi);
            let comp = types_compose(&urep, &types_compose(&u, &types_inverse(&urep))?)?;
            worst = worst.max(formula.distance(&comp));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "conjugation_unit_phase", 1e-15, || {
        let mut r = rng_for(cfg, 0x1004);
        let dim = h_dim(&mani, n);
        let e = GaugeJet::identity(&mani, n);
        let mut worst = 0.0_f64;
        for _ in 0..10 {
            let u = random_types(dim, 1.0, &mut r);
            let (_, th) = conjugate_types(&e, &u)?;
            worst = worst.max(th.abs());
        }
        Ok(worst)
    });

    let make_gens = |seed: u64| -> Result<LocalGeneratorSet> {
        let mut r = rng_for(cfg, seed);
        // keep the N₀ deviation under ε across tangent dims and groups
        let gscale = 0.03 * (3.0 / (n * n - 1) as f64).sqrt() / mani.tangent_dim() as f64;
        let jets: Vec<GaugeJet> = (0..4)
            .map(|_| random_jet_in_region(&mani, n, &region, gscale, &mut r))
            .collect::<Result<Vec<_>>>()?;
        LocalGeneratorSet::new(region.clone(), jets, cfg.epsilon)
    };
    let make_fields = || -> Result<Vec<AlgebraField>> {
        let basis = su_basis(n)?;
        let f1 = bump_inside_region(&mani, &region, &basis.elems[basis.cartan_idx[0]].scale(0.8))?;
        let f2 = bump_inside_region(&mani, &region, &basis.elems[0].scale(0.7))?;
        Ok(vec![f1, f2])
    };

    run_check(&mut report, cfg, "commutant_member", 1e-10, || {
        let gens = make_gens(0x1005)?;
        if !gens.all_within_epsilon() {
            return Err(Error::Numerical("generators exceed N₀(ε)".into()));
        }
        let fields = make_fields()?;
        let mut r = rng_for(cfg, 0x1006);
        let mut worst = 0.0_f64;
        for _ in 0..3 {
            let u = ao_prime_element(&mani, n, &region, 0.9, &mut r);
            let rep = commutant_constraints(&region, &u, &gens, &fields)?;
            worst = worst.max(rep.max_residual());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "commutant_detect_local_rotation", 0.0, || {
        let gens = make_gens(0x1007)?;
        let fields = make_fields()?;
        let mut r = rng_for(cfg, 0x1008);
        let u = ao_prime_element(&mani, n, &region, 0.9, &mut r);
        let idx_o = region_indices(&mani, n, &region);
        let rot = plane_rotation(h_dim(&mani, n), idx_o[0], idx_o[1], 1e-3);
        let planted = TypeS::new(u.a() * rot, u.b().clone(), u.c())?;
        let rep = commutant_constraints(&region, &planted, &gens, &fields)?;
        Ok(1e-6 - rep.fixes_local.max(rep.commute))
    });

    run_check(&mut report, cfg, "commutant_detect_bracket", 0.0, || {
        let gens = make_gens(0x1009)?;
        let fields = make_fields()?;
        let mut r = rng_for(cfg, 0x100A);
        let u = ao_prime_element(&mani, n, &region, 0.9, &mut r);
        let dec = cartan_root_decompose(n)?;
        let e_alpha = &dec.root_spaces[0][0];
        let dim_g = n * n - 1;
        let mut b = u.b().clone();
        // plant a root-space component where the Cartan test field peaks
        let site = field_peak_site(&fields[0]);
        let off = site * mani.tangent_dim() * dim_g;
        for i in 0..dim_g {
            b[off + i] += e_alpha[i] * c(1e-3, 0.0);
        }
        let planted = TypeS::new(u.a().clone(), b, u.c())?;
        let rep = commutant_constraints(&region, &planted, &gens, &fields)?;
        Ok(1e-6 - rep.bracket)
    });

    run_check(&mut report, cfg, "commutant_detect_supp_b", 0.0, || {
        let gens = make_gens(0x100B)?;
        let fields = make_fields()?;
        let mut r = rng_for(cfg, 0x100C);
        let u = ao_prime_element(&mani, n, &region, 0.9, &mut r);
        let idx_o = region_indices(&mani, n, &region);
        let mut b = u.b().clone();
        b[idx_o[2]] += c(1e-3, 0.0);
        let planted = TypeS::new(u.a().clone(), b, u.c())?;
        let rep = commutant_constraints(&region, &planted, &gens, &fields)?;
        Ok(1e-6 - rep.supp_b)
    });

    run_check(&mut report, cfg, "commutant_detect_invariance", 0.0, || {
        let gens = make_gens(0x100D)?;
        let fields = make_fields()?;
        let mut r = rng_for(cfg, 0x100E);
        let u = ao_prime_element(&mani, n, &region, 0.9, &mut r);
        let idx_o = region_indices(&mani, n, &region);
        let idx_oc = region_indices(&mani, n, &region.complement());
        let rot = plane_rotation(h_dim(&mani, n), idx_o[0], idx_oc[0], 1e-3);
        let planted = TypeS::new(rot * u.a(), u.b().clone(), u.c())?;
        let rep = commutant_constraints(&region, &planted, &gens, &fields)?;
        Ok(1e-6 - rep.invariance)
    });

    run_check(&mut report, cfg, "root_constraint_clean", 1e-12, || {
        let dec = cartan_root_decompose(n)?;
        let fields = make_fields()?;
        let cartan_fields: Vec<AlgebraField> = fields
            .into_iter()
            .filter(|f| {
                // keep only the Cartan-valued test fields
                (0..mani.sites()).all(|s| {
                    let m = f.value(s).matrix();
                    (0..n).all(|a| (0..n).all(|b| a == b || m[(a, b)].norm() < 1e-12))
                })
            })
            .collect();
        let mut r = rng_for(cfg, 0x100F);
        let u = ao_prime_element(&mani, n, &region, 1.0, &mut r);
        root_constraint_check(&region, u.b(), &dec, &cartan_fields)
    });

    run_check(&mut report, cfg, "totality_beta", 0.5, || {
        let mut miss = 0usize;
        for sites in 1..=8usize {
            let o = Region::new(0..sites, mani.sites())?;
            let dim_o = sites * mani.tangent_dim() * (n * n - 1);
            let (rank, d) =
                totality_rank(&mani, n, &o, TotalityMode::Beta, 2 * dim_o, cfg.seed ^ 0x1010)?;
            if rank != d {
                miss += 1;
            }
        }
        Ok(miss as f64)
    });

    run_check(&mut report, cfg, "totality_vdphi", 0.5, || {
        let mut miss = 0usize;
        for sites in 1..=8usize {
            let o = Region::new(0..sites, mani.sites())?;
            let dim_o = sites * mani.tangent_dim() * (n * n - 1);
            let (rank, d) =
                totality_rank(&mani, n, &o, TotalityMode::VDphi, 2 * dim_o, cfg.seed ^ 0x1011)?;
            if rank != d {
                miss += 1;
            }
        }
        Ok(miss as f64)
    });

    run_check(&mut report, cfg, "splitting_identity", 1e-12, || {
        let mut r = rng_for(cfg, 0x1012);
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let psi = random_jet_in_region(&mani, n, &region, 0.9, &mut r)?;
            let f = AlgebraField::random_ray_in_region(&mani, n, &region, 0.9, &mut r)?;
            let lhs = v_apply(&psi, &f.differential())?;
            let rhs = beta(&jet_mul(&psi, &jet_from_algebra_field(&f, 1.0))?).sub(&beta(&psi))?;
            worst = worst.max(lhs.sub(&rhs)?.norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "near_identity_factorization", 1e-10, || {
        let basis = su_basis(n)?;
        let dir = basis.elems[0]
            .add(&basis.elems[basis.cartan_idx[0]])
            .scale(0.8);
        let f = bump_algebra_field(&mani, mani.sites() / 4, 1.8, &dir)?;
        let psi = jet_from_algebra_field(&f, 1.0);
        let factors = near_identity_factorization(&psi, 32, cfg.epsilon)?;
        let mut prod = GaugeJet::identity(&mani, n);
        for fct in &factors {
            prod = jet_mul(&prod, fct)?;
        }
        let mut worst = 0.0_f64;
        for s in 0..mani.sites() {
            worst = worst.max((prod.group_value(s).matrix() - psi.group_value(s).matrix()).norm());
            for mu in 0..mani.tangent_dim() {
                worst = worst.max(prod.b_component(s, mu).sub(psi.b_component(s, mu)).norm());
            }
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "tensor_pairing", 1e-12, || {
        let mut r = rng_for(cfg, 0x1013);
        let dim = h_dim(&mani, n);
        let mut worst = 0.0_f64;
        for _ in 0..5 {
            let v = CoherentVec::new(vec![
                (c(0.8, -0.1), random_hvec(dim, 1.0, &mut r)),
                (c(-0.2, 0.5), random_hvec(dim, 0.8, &mut r)),
            ])?;
            let w = CoherentVec::exp_vector(random_hvec(dim, 1.0, &mut r))?;
            let sv = tensor_factorize(&v, &mani, n, &region)?;
            let sw = tensor_factorize(&w, &mani, n, &region)?;
            let lhs = sv.pairing(&sw)?;
            let rhs = coh_inner(&v, &w)?;
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "tensor_local_action", 1e-10, || {
        let mut r = rng_for(cfg, 0x1014);
        let dim = h_dim(&mani, n);
        let fs = fock_scale(&mani, n);
        let psi = random_jet_in_region(&mani, n, &region, 0.9 * fs, &mut r)?;
        let mut worst = 0.0_f64;
        for _ in 0..4 {
            let x = random_hvec(dim, 1.0, &mut r);
            let v = CoherentVec::exp_vector(x)?;
            let uv = types_apply(&energy_rep(&psi), &v)?;
            let split_uv = tensor_factorize(&uv, &mani, n, &region)?;
            let split_v = tensor_factorize(&v, &mani, n, &region)?;
            // the O′ factor is untouched by a local operator
            worst = worst.max((&split_uv.terms()[0].2 - &split_v.terms()[0].2).norm());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "cyclicity_floor", 1e-8, || {
        let mut r = rng_for(cfg, 0x1015);
        let fs = fock_scale(&mani, n);
        let gens: Vec<GaugeJet> = (0..4)
            .map(|_| random_jet_in_region(&mani, n, &region, 0.4 * fs, &mut r))
            .collect::<Result<Vec<_>>>()?;
        let target = unit_target_in_complement(&mani, n, &region)?;
        let (measured, floor) = vacuum_cyclicity_gap(&region, &gens, &target, 64)?;
        Ok(floor - measured)
    });

    run_check(&mut report, cfg, "cyclicity_empty_orbit", 1e-10, || {
        let target = unit_target_in_complement(&mani, n, &region)?;
        let (measured, floor) = vacuum_cyclicity_gap(&region, &[], &target, 64)?;
        Ok((measured - floor).abs())
    });

    run_check(&mut report, cfg, "cyclicity_monotone", 1e-9, || {
        let mut r = rng_for(cfg, 0x1016);
        let fs = fock_scale(&mani, n);
        let gens: Vec<GaugeJet> = (0..3)
            .map(|_| random_jet_in_region(&mani, n, &region, 0.4 * fs, &mut r))
            .collect::<Result<Vec<_>>>()?;
        let target = unit_target_in_complement(&mani, n, &region)?;
        let mut last = f64::INFINITY;
        let mut worst_increase = 0.0_f64;
        for cap in [1usize, 8, 24, 64] {
            let (measured, _) = vacuum_cyclicity_gap(&region, &gens, &target, cap)?;
            worst_increase = worst_increase.max(measured - last);
            last = measured;
        }
        Ok(worst_increase.max(0.0))
    });

    run_check(&mut report, cfg, "separating_kernel_witness", 0.5, || {
        let mut r = rng_for(cfg, 0x1017);
        let fs = fock_scale(&mani, n);
        let psi1 = random_jet_in_region(&mani, n, &region, 0.9 * fs, &mut r)?;
        let twist = random_jet_in_region(&mani, n, &region, 0.7 * fs, &mut r)?;
        let psi2 = GaugeJet::from_site_data(
            &mani,
            n,
            (0..mani.sites()).map(|s| twist.group_value(s).clone()).collect(),
            (0..mani.sites())
                .map(|s| {
                    (0..mani.tangent_dim())
                        .map(|mu| psi1.b_component(s, mu).clone())
                        .collect()
                })
                .collect(),
        )?;
        let (count, kernel) = separating_kernel(&[psi1.clone(), psi2.clone()])?;
        // Q = U(ψ₁) − U(ψ₂) must be a nonzero operator killing the vacuum
        let u1 = energy_rep(&psi1);
        let u2 = energy_rep(&psi2);
        let l = vec![(c(1.0, 0.0), u1.clone()), (c(-1.0, 0.0), u2.clone())];
        let grid = default_grid(u1.dim(), &[&u1, &u2], 12, cfg.seed ^ 0x1018);
        let nonzero = op_equal(&l, &[], &grid)?;
        if nonzero <= 1e-3 {
            return Err(Error::Numerical("witness operator collapsed to zero".into()));
        }
        Ok((count as f64 - 2.0).abs() + (kernel as f64 - 1.0).abs())
    });

    run_check(&mut report, cfg, "isotony_additivity_rank", 0.5, || {
        // generator samples of nested regions embed; single-site unions
        // reach the global rank
        let total = mani.sites();
        let dim_g = n * n - 1;
        let mut miss = 0usize;
        let o_small = Region::new(0..2, total)?;
        let o_big = Region::new(0..4, total)?;
        let (rk_small, _) = totality_rank(
            &mani,
            n,
            &o_small,
            TotalityMode::Beta,
            4 * 2 * mani.tangent_dim() * dim_g,
            cfg.seed ^ 0x1019,
        )?;
        let (rk_big, _) = totality_rank(
            &mani,
            n,
            &o_big,
            TotalityMode::Beta,
            4 * 4 * mani.tangent_dim() * dim_g,
            cfg.seed ^ 0x101A,
        )?;
        if rk_small > rk_big {
            miss += 1;
        }
        // additivity at the sample level: single-site generators jointly
        // span what global generators span
        let mut union_rank = 0usize;
        for s in 0..total.min(6) {
            let o = Region::new(s..=s, total)?;
            let (rk, d) = totality_rank(
                &mani,
                n,
                &o,
                TotalityMode::Beta,
                2 * mani.tangent_dim() * dim_g + 4,
                cfg.seed ^ (0x101B + s as u64),
            )?;
            if rk != d {
                miss += 1;
            }
            union_rank += rk;
        }
        let expect = total.min(6) * mani.tangent_dim() * dim_g;
        if union_rank != expect {
            miss += 1;
        }
        Ok(miss as f64)
    });

    Ok(report)
}

/// Largest contiguous index run of a region: (start, length).
fn longest_run(region: &Region) -> Option<(usize, usize)> {
    let sites: Vec<usize> = region.iter().collect();
    let mut best: Option<(usize, usize)> = None;
    let mut start = *sites.first()?;
    let mut len = 0usize;
    let mut prev = None;
    for &s in &sites {
        match prev {
            Some(p) if s == p + 1 => len += 1,
            _ => {
                start = s;
                len = 1;
            }
        }
        prev = Some(s);
        if best.map(|(_, l)| len > l).unwrap_or(true) {
            best = Some((start, len));
        }
    }
    best
}

/// Bump field supported strictly inside the region: centered on the
/// longest contiguous run, radius just short of the run boundary (and of
/// one row spacing on the torus).
fn bump_inside_region(
    mani: &SampledManifold,
    region: &Region,
    direction: &AlgebraElement,
) -> Result<AlgebraField> {
    let (start, len) =
        longest_run(region).ok_or_else(|| Error::Numerical("empty region".into()))?;
    let center = start + len / 2;
    let margin = (center - start).min(start + len - 1 - center) + 1;
    let radius = match mani.topology() {
        crate::lattice::Topology::Circle { sites } => {
            let dx = 2.0 * std::f64::consts::PI / *sites as f64;
            dx * (margin as f64 - 0.05)
        }
        crate::lattice::Topology::Torus { rows, cols } => {
            let dx = 2.0 * std::f64::consts::PI / *cols as f64;
            let dy = 2.0 * std::f64::consts::PI / *rows as f64;
            (dx * (margin as f64 - 0.05)).min(0.95 * dy)
        }
    };
    let f = bump_algebra_field(mani, center, radius, direction)?;
    if !f.support().is_subset_of(region) {
        return Err(Error::Numerical("bump leaks outside the region".into()));
    }
    Ok(f)
}

/// Site where the field value is largest.
fn field_peak_site(f: &AlgebraField) -> usize {
    let mani = f.manifold();
    (0..mani.sites())
        .max_by(|&a, &b| {
            f.value(a)
                .norm()
                .partial_cmp(&f.value(b).norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0)
}

fn unit_target_in_complement(
    mani: &SampledManifold,
    n: usize,
    region: &Region,
) -> Result<crate::lattice::OneForm> {
    let comp = region.complement();
    let mid = comp
        .iter()
        .nth(comp.len() / 2)
        .ok_or_else(|| Error::Numerical("complement region is empty".into()))?;
    let basis = su_basis(n)?;
    let f = bump_algebra_field(mani, mid, 1.2, &basis.elems[0])?;
    let w = f.differential();
    if !w.support().is_subset_of(&comp) {
        return Err(Error::Numerical(
            "complement bump leaks into the region".into(),
        ));
    }
    let nrm = w.norm();
    Ok(w.scale(1.0 / nrm))
}

// -------------------------------------------------------------- modular --

fn modular_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("modular", &cfg.summary());
    let mani = cfg.manifold()?;
    let n = cfg.group;
    let dim = h_dim(&mani, n);
    // generic standard-subspace checks are representation-independent;
    // cap their ambient dimension so large instances stay inside the
    // wall-time budget (the default instance runs at full dimension)
    let dmod = dim.min(96);
    let region = cfg.parsed_region()?;

    let perturbed = |seed: u64, amp: f64| -> RealSubspace {
        let mut r = rng_for(cfg, seed);
        let mut spanners = Vec::with_capacity(dmod);
        for i in 0..dmod {
            let mut v = random_hvec(dmod, amp, &mut r);
            v[i] += c(1.0, 0.0);
            spanners.push(v);
        }
        RealSubspace::from_complex_spanners(dmod, &spanners)
    };

    run_check(&mut report, cfg, "lattice_identities", 1e-8, || {
        // a region-style diagonal complex projector in the (possibly
        // capped) modular ambient: the leading block of the region's
        // coordinate projector
        let pfull = crate::localnet::subspace_projector(&mani, n, &region);
        let p = RMat::from_fn(dmod, dmod, |i, j| pfull[(i, j)]);
        let mut worst = 0.0_f64;
        for k in 0..20u64 {
            let ks = perturbed(0xA000 + k, 0.3);
            let rep = lattice_suite(&ks, &p);
            worst = worst.max(rep.max_residual());
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "modular_identities", 1e-10, || {
        let mut worst = 0.0_f64;
        for k in 0..20u64 {
            let ks = perturbed(0xB000 + k, 0.3);
            let md = canonical_involution(&ks)?;
            let nn = 2 * dmod;
            worst = worst.max((&md.j * &md.j - RMat::identity(nn, nn)).norm());
            worst = worst.max(
                (&md.j * &md.delta_half - &md.delta_half_inv * &md.j).norm()
                    / (1.0 + md.delta_half.norm()),
            );
            let kp = symplectic_complement(&ks);
            worst = worst.max(projector_distance(&ks.map_by(&md.j), &kp));
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "delta_positive", 0.0, || {
        let ks = perturbed(0xB100, 0.3);
        let md = canonical_involution(&ks)?;
        let eig = md.delta.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok((-min).max(0.0))
    });

    run_check(&mut report, cfg, "adjoint_involution", 1e-9, || {
        let ks = perturbed(0xB200, 0.3);
        let md = canonical_involution(&ks)?;
        let kp = symplectic_complement(&ks);
        let mdp = canonical_involution(&kp)?;
        Ok((&mdp.s - md.s.transpose()).norm() / (1.0 + md.s.norm()))
    });

    run_check(&mut report, cfg, "second_quantized_involution", 1e-10, || {
        use rand_distr::Distribution;
        let mut worst = 0.0_f64;
        // canonical real form
        let k0 = RealSubspace::real_axis(dmod);
        let mut h = CVec::zeros(dmod);
        h[0] = c(1.0, 0.0);
        worst = worst.max(second_quantized_s_check(&k0, &h)?);
        // rotated real forms with random K-vectors
        let mut r = rng_for(cfg, 0xB300);
        let u = crate::fock::haar_unitary(dmod, &mut r);
        let spanners: Vec<CVec> = (0..dmod)
            .map(|i| {
                let mut e = CVec::zeros(dmod);
                e[i] = c(1.0, 0.0);
                &u * e
            })
            .collect();
        let k = RealSubspace::from_complex_spanners(dmod, &spanners);
        let normal = rand_distr::StandardNormal;
        for _ in 0..3 {
            let mut hv = CVec::zeros(dmod);
            for s in &spanners {
                let x: f64 = normal.sample(&mut r);
                hv += s * c(0.25 * x, 0.0);
            }
            worst = worst.max(second_quantized_s_check(&k, &hv)?);
        }
        Ok(worst)
    });

    run_check(&mut report, cfg, "gauge_contrast", 0.5, || {
        // H(O)-type complex subspaces are never standard for proper O,
        // while the Weyl-side real form is
        let mut miss = 0usize;
        let idx = region_indices(&mani, n, &region);
        let spanners: Vec<CVec> = idx
            .iter()
            .map(|&i| {
                let mut e = CVec::zeros(dim);
                e[i] = c(1.0, 0.0);
                e
            })
            .collect();
        let k_gauge = RealSubspace::complex_span_as_real(dim, &spanners);
        let (ok, diag) = is_standard(&k_gauge);
        if ok || diag.intersection_dim != k_gauge.dim_r() {
            miss += 1;
        }
        if !is_standard(&RealSubspace::real_axis(dim)).0 {
            miss += 1;
        }
        Ok(miss as f64)
    });

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_config_error() {
        let cfg = SuiteConfig::default();
        assert!(matches!(
            run_suite("bogus", &cfg),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn type_s_suite_passes_on_small_instance() {
        let mut cfg = SuiteConfig::default();
        cfg.set("sites", "8", 0).unwrap();
        let report = run_suite("typeS", &cfg).unwrap();
        assert!(report.passed(), "{}", report.render(ReportFormat::Table));
    }

    #[test]
    fn records_are_deterministic() {
        let mut cfg = SuiteConfig::default();
        cfg.set("sites", "8", 0).unwrap();
        let a = run_suite("typeS", &cfg).unwrap().render(ReportFormat::Records);
        let b = run_suite("typeS", &cfg).unwrap().render(ReportFormat::Records);
        assert_eq!(a, b);
    }

    #[test]
    fn localnet_suite_rejects_improper_region() {
        let mut cfg = SuiteConfig::default();
        cfg.set("region", "all", 0).unwrap();
        assert!(run_suite("localnet", &cfg).is_err());
    }
}
