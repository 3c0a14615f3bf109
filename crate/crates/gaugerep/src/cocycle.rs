//! The orthogonal representation `V(ψ) = Ad_ψ` on 1-forms, the
//! Maurer–Cartan cocycle β, coboundaries, fixed-space projections, ergodic
//! limits and coboundary-distance fitting.
//!
//! With jets, the cocycle identity
//! `β(ψ₁ψ₂) = β(ψ₁) + V(ψ₁)β(ψ₂)` holds with zero discretization error:
//! both sides are assembled from the same sitewise adjoint action.

use crate::error::{Error, Result};
use crate::lattice::{h_dim, jet_mul, jet_pow, GaugeJet, OneForm};
use crate::lie::adjoint_matrix;
use crate::{RMat, RVec};

/// Sitewise adjoint action of a jet on a 1-form.
pub fn v_apply(psi: &GaugeJet, omega: &OneForm) -> Result<OneForm> {
    if psi.manifold() != omega.manifold() || psi.group_dim() != omega.group_dim() {
        return Err(Error::ManifoldMismatch);
    }
    let mani = omega.manifold();
    let td = mani.tangent_dim();
    let comps = (0..mani.sites())
        .map(|s| {
            (0..td)
                .map(|mu| crate::lie::adjoint_action(psi.group_value(s), omega.component(s, mu)))
                .collect()
        })
        .collect();
    OneForm::from_components(mani, omega.group_dim(), comps)
}

/// Matrix of `V(ψ)` on the volume-weighted coordinates of H₀: block
/// diagonal with one `Ad(g(x))` block per site and tangent direction.
pub fn v_matrix(psi: &GaugeJet) -> RMat {
    let mani = psi.manifold();
    let n = psi.group_dim();
    let dim_g = n * n - 1;
    let td = mani.tangent_dim();
    let d = h_dim(mani, n);
    let mut m = RMat::zeros(d, d);
    for s in 0..mani.sites() {
        let block = adjoint_matrix(psi.group_value(s));
        for mu in 0..td {
            let off = (s * td + mu) * dim_g;
            for i in 0..dim_g {
                for j in 0..dim_g {
                    m[(off + i, off + j)] = block[(i, j)];
                }
            }
        }
    }
    m
}

/// The Maurer–Cartan cocycle: the jet's exact logarithmic-derivative field.
pub fn beta(psi: &GaugeJet) -> OneForm {
    psi.b_oneform()
}

/// The coboundary `∂v(ψ) = V(ψ)v − v`.
pub fn coboundary(v: &OneForm, psi: &GaugeJet) -> Result<OneForm> {
    v_apply(psi, v)?.sub(v)
}

/// A cocycle evaluator: the Maurer–Cartan cocycle or a coboundary.
#[derive(Debug, Clone)]
pub enum Cocycle {
    MaurerCartan,
    Coboundary(OneForm),
}

impl Cocycle {
    pub fn eval(&self, psi: &GaugeJet) -> Result<OneForm> {
        match self {
            Cocycle::MaurerCartan => Ok(beta(psi)),
            Cocycle::Coboundary(v) => coboundary(v, psi),
        }
    }
}

/// Sampled cocycle values: (ψ, γ(ψ)) pairs.
#[derive(Debug, Clone)]
pub struct CocycleSamples {
    pub pairs: Vec<(GaugeJet, OneForm)>,
}

impl CocycleSamples {
    pub fn from_cocycle(gamma: &Cocycle, jets: &[GaugeJet]) -> Result<Self> {
        let pairs = jets
            .iter()
            .map(|j| Ok((j.clone(), gamma.eval(j)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pairs })
    }

    /// Checks the localization property supp(γ(ψ)) ⊆ supp(ψ) on every pair.
    pub fn supports_localized(&self) -> bool {
        self.pairs
            .iter()
            .all(|(j, g)| g.support().is_subset_of(&j.support()))
    }
}

/// Orthogonal projector onto the fixed space {ω : V(ψ)ω = ω}, computed from
/// the singular values of V(ψ) − I (values below 1e−8 count as zero).
pub fn fixed_projection(psi: &GaugeJet) -> RMat {
    let v = v_matrix(psi);
    let d = v.nrows();
    let m = &v - RMat::identity(d, d);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let mut p = RMat::zeros(d, d);
    for (i, &sv) in svd.singular_values.iter().enumerate() {
        if sv < 1e-8 {
            let w = vt.row(i).transpose();
            p += &w * w.transpose();
        }
    }
    p
}

/// Ergodic pair: `((1/n)·γ(ψ₁ψ₂ⁿψ₃), V(ψ₁)·P_{ψ₂}·γ(ψ₂))`.
///
/// The first component is computed by explicit jet products; the second is
/// the mean-ergodic limit and does not depend on ψ₃.
pub fn ergodic_limit(
    gamma: &Cocycle,
    psi1: &GaugeJet,
    psi2: &GaugeJet,
    psi3: &GaugeJet,
    n: usize,
) -> Result<(OneForm, OneForm)> {
    if n == 0 {
        return Err(Error::Numerical("ergodic average needs n >= 1".into()));
    }
    let word = jet_mul(&jet_mul(psi1, &jet_pow(psi2, n)?)?, psi3)?;
    let first = gamma.eval(&word)?.scale(1.0 / n as f64);

    let g2 = gamma.eval(psi2)?;
    let p = fixed_projection(psi2);
    let fixed = &p * g2.coords();
    let fixed_form = OneForm::from_coords(g2.manifold(), g2.group_dim(), &fixed)?;
    let second = v_apply(psi1, &fixed_form)?;
    Ok((first, second))
}

/// Least-squares fit of a coboundary to sampled cocycle values: minimizes
/// `Σᵢ ‖γ(ψᵢ) − (V(ψᵢ) − I)v‖²` over v, returning the minimizer (minimum
/// norm when rank deficient) and the residual `√(minimal sum)`.
pub fn coboundary_fit(samples: &CocycleSamples) -> Result<(OneForm, f64)> {
    let (first_jet, first_val) = samples
        .pairs
        .first()
        .ok_or_else(|| Error::Numerical("coboundary fit needs at least one sample".into()))?;
    let mani = first_val.manifold().clone();
    let n = first_val.group_dim();
    let d = h_dim(&mani, n);
    let rows = samples.pairs.len() * d;
    let mut a = RMat::zeros(rows, d);
    let mut rhs = RVec::zeros(rows);
    let _ = first_jet;
    for (k, (jet, val)) in samples.pairs.iter().enumerate() {
        let vm = v_matrix(jet) - RMat::identity(d, d);
        let g = val.coords();
        for i in 0..d {
            rhs[k * d + i] = g[i];
            for j in 0..d {
                a[(k * d + i, j)] = vm[(i, j)];
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let v = svd
        .solve(&rhs, 1e-10)
        .map_err(|e| Error::Numerical(format!("least squares failed: {e}")))?;
    let residual = (&a * &v - &rhs).norm();
    Ok((OneForm::from_coords(&mani, n, &v)?, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{
        bump_algebra_field, inner, jet_from_algebra_field, jet_inv, random_jet_in_region,
        AlgebraField, Region, SampledManifold,
    };
    use crate::lie::{su_basis, AlgebraElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn circle32() -> SampledManifold {
        SampledManifold::circle(32).unwrap()
    }

    #[test]
    fn v_identity_acts_trivially() {
        let m = circle32();
        let mut r = rng(1);
        let w = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        let e = GaugeJet::identity(&m, 2);
        assert_eq!(v_apply(&e, &w).unwrap(), w);
    }

    #[test]
    fn v_is_isometry() {
        let m = circle32();
        let mut r = rng(2);
        let psi = random_jet_in_region(&m, 2, &Region::all(32), 1.0, &mut r).unwrap();
        let w1 = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        let w2 = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        let lhs = inner(&v_apply(&psi, &w1).unwrap(), &v_apply(&psi, &w2).unwrap()).unwrap();
        let rhs = inner(&w1, &w2).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn v_exponential_series_expansion() {
        // V(e^{sφ})ω = ω + s[φ,ω] + s²/2 [φ,[φ,ω]] + … at s = 0.1
        let m = circle32();
        let mut r = rng(3);
        let s = 0.1;
        let field = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r).unwrap();
        let omega = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        let psi = jet_from_algebra_field(&field, s);
        let got = v_apply(&psi, &omega).unwrap();

        let mut series = omega.clone();
        let mut term = omega.clone();
        for k in 1..=14 {
            // term ← (s/k)·[φ, term] sitewise
            let comps = (0..m.sites())
                .map(|site| {
                    (0..1)
                        .map(|mu| field.value(site).bracket(term.component(site, mu)).scale(s / k as f64))
                        .collect()
                })
                .collect();
            term = OneForm::from_components(&m, 2, comps).unwrap();
            series = series.add(&term).unwrap();
        }
        let resid = got.sub(&series).unwrap().norm();
        assert!(resid < 1e-10, "series residual {resid:.3e}");
    }

    #[test]
    fn beta_of_identity_vanishes() {
        let m = circle32();
        assert!(beta(&GaugeJet::identity(&m, 2)).support().is_empty());
    }

    #[test]
    fn beta_of_cartan_field_is_differential() {
        let m = circle32();
        let b = su_basis(2).unwrap();
        let dir = b.elems[b.cartan_idx[0]].scale(1.1);
        let f = bump_algebra_field(&m, 6, 1.2, &dir).unwrap();
        let psi = jet_from_algebra_field(&f, 1.0);
        assert_eq!(beta(&psi), f.differential());
    }

    #[test]
    fn beta_inverse_formula_is_exact() {
        let m = circle32();
        let mut r = rng(5);
        let psi = random_jet_in_region(&m, 2, &Region::parse("0-13", 32).unwrap(), 1.0, &mut r)
            .unwrap();
        let inv = jet_inv(&psi);
        let lhs = beta(&inv);
        let rhs = v_apply(&inv, &beta(&psi)).unwrap().scale(-1.0);
        assert_eq!(lhs, rhs, "β(ψ⁻¹) = −V(ψ⁻¹)β(ψ) bitwise");
    }

    #[test]
    fn cocycle_identity_is_bitwise_exact() {
        let m = circle32();
        let mut r = rng(7);
        for _ in 0..10 {
            let p1 = random_jet_in_region(&m, 2, &Region::parse("0-17", 32).unwrap(), 1.0, &mut r)
                .unwrap();
            let p2 = random_jet_in_region(&m, 2, &Region::parse("9-27", 32).unwrap(), 1.0, &mut r)
                .unwrap();
            let lhs = beta(&jet_mul(&p1, &p2).unwrap());
            let rhs = beta(&p1).add(&v_apply(&p1, &beta(&p2)).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn beta_support_localized() {
        let m = circle32();
        let mut r = rng(9);
        let jets: Vec<GaugeJet> = (0..6)
            .map(|_| {
                random_jet_in_region(&m, 2, &Region::parse("4-12", 32).unwrap(), 1.0, &mut r)
                    .unwrap()
            })
            .collect();
        let samples = CocycleSamples::from_cocycle(&Cocycle::MaurerCartan, &jets).unwrap();
        assert!(samples.supports_localized());
    }

    #[test]
    fn locality_of_beta_on_shared_region() {
        // ψ₁ = ψ₂ on U ⇒ β(ψ₁) = β(ψ₂) on U, exactly
        let m = circle32();
        let mut r = rng(11);
        let base = AlgebraField::random_in_region(&m, 2, &Region::all(32), 0.8, &mut r).unwrap();
        let other = AlgebraField::random_in_region(
            &m,
            2,
            &Region::parse("16-31", 32).unwrap(),
            0.8,
            &mut r,
        )
        .unwrap();
        // fields agree on U = 0..16
        let mixed = AlgebraField::new(
            &m,
            2,
            (0..32)
                .map(|s| {
                    if s < 16 {
                        base.value(s).clone()
                    } else {
                        other.value(s).clone()
                    }
                })
                .collect(),
            (0..32)
                .map(|s| {
                    if s < 16 {
                        vec![base.diff(s, 0).clone()]
                    } else {
                        vec![other.diff(s, 0).clone()]
                    }
                })
                .collect(),
        )
        .unwrap();
        let j1 = jet_from_algebra_field(&base, 1.0);
        let j2 = jet_from_algebra_field(&mixed, 1.0);
        for s in 0..16 {
            assert_eq!(beta(&j1).component(s, 0), beta(&j2).component(s, 0));
        }
    }

    #[test]
    fn coboundary_identity_jet_is_zero() {
        let m = circle32();
        let mut r = rng(13);
        let v = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        let d = coboundary(&v, &GaugeJet::identity(&m, 2)).unwrap();
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn coboundary_power_bound() {
        // ‖∂v(ψⁿ)‖/n ≤ 2‖v‖/n
        let m = circle32();
        let mut r = rng(17);
        let v = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        let psi = random_jet_in_region(&m, 2, &Region::all(32), 0.9, &mut r).unwrap();
        for n in [1usize, 4, 16, 64] {
            let d = coboundary(&v, &jet_pow(&psi, n).unwrap()).unwrap();
            assert!(d.norm() <= 2.0 * v.norm() + 1e-10);
        }
    }

    #[test]
    fn coboundary_satisfies_cocycle_identity() {
        let m = circle32();
        let mut r = rng(19);
        let v = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        for _ in 0..5 {
            let p1 = random_jet_in_region(&m, 2, &Region::all(32), 0.8, &mut r).unwrap();
            let p2 = random_jet_in_region(&m, 2, &Region::all(32), 0.8, &mut r).unwrap();
            let lhs = coboundary(&v, &jet_mul(&p1, &p2).unwrap()).unwrap();
            let rhs = coboundary(&v, &p1)
                .unwrap()
                .add(&v_apply(&p1, &coboundary(&v, &p2).unwrap()).unwrap())
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() <= 1e-12);
        }
    }

    #[test]
    fn fixed_projection_of_identity_is_identity() {
        let m = circle32();
        let p = fixed_projection(&GaugeJet::identity(&m, 2));
        let d = p.nrows();
        assert!((p - RMat::identity(d, d)).norm() < 1e-12);
    }

    #[test]
    fn fixed_projection_acts_trivially_off_support() {
        let m = circle32();
        let mut r = rng(23);
        let o = Region::parse("0-9", 32).unwrap();
        let psi = random_jet_in_region(&m, 2, &o, 1.0, &mut r).unwrap();
        let w = AlgebraField::random_in_region(&m, 2, &o.complement(), 1.0, &mut r)
            .unwrap()
            .differential();
        let p = fixed_projection(&psi);
        let pw = &p * w.coords();
        assert!((pw - w.coords()).norm() < 1e-10);
    }

    #[test]
    fn fixed_projection_rank_matches_sitewise_oracle() {
        let m = circle32();
        let mut r = rng(29);
        let psi = random_jet_in_region(&m, 2, &Region::parse("0-15", 32).unwrap(), 1.0, &mut r)
            .unwrap();
        let p = fixed_projection(&psi);
        let rank = p.trace().round() as usize;
        // oracle: per-site eigenvalue-1 multiplicity of the Ad blocks
        let mut want = 0usize;
        for s in 0..32 {
            let block = adjoint_matrix(psi.group_value(s));
            let d = block.nrows();
            let svd = (block - RMat::identity(d, d)).svd(false, false);
            want += svd.singular_values.iter().filter(|&&x| x < 1e-8).count();
        }
        assert_eq!(rank, want);
    }

    #[test]
    fn ergodic_limit_trivial_middle() {
        let m = circle32();
        let mut r = rng(31);
        let p1 = random_jet_in_region(&m, 2, &Region::parse("0-6", 32).unwrap(), 0.8, &mut r)
            .unwrap();
        let p3 = random_jet_in_region(&m, 2, &Region::parse("10-16", 32).unwrap(), 0.8, &mut r)
            .unwrap();
        let e = GaugeJet::identity(&m, 2);
        let n = 64;
        let (first, second) = ergodic_limit(&Cocycle::MaurerCartan, &p1, &e, &p3, n).unwrap();
        let direct = beta(&jet_mul(&p1, &p3).unwrap()).scale(1.0 / n as f64);
        assert!(first.sub(&direct).unwrap().norm() < 1e-13);
        assert!(second.norm() < 1e-13);
    }

    #[test]
    fn ergodic_limit_abelian_is_exact() {
        let m = circle32();
        let b = su_basis(2).unwrap();
        let dir = b.elems[b.cartan_idx[0]].scale(0.9);
        let f = bump_algebra_field(&m, 12, 1.4, &dir).unwrap();
        let psi2 = jet_from_algebra_field(&f, 1.0);
        let e = GaugeJet::identity(&m, 2);
        let dphi = f.differential();
        for n in [1usize, 8, 33] {
            let (first, second) = ergodic_limit(&Cocycle::MaurerCartan, &e, &psi2, &e, n).unwrap();
            assert!(first.sub(&dphi).unwrap().norm() < 1e-12, "(1/n)β(e^{{nφ}}) = dφ");
            assert!(second.sub(&dphi).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn ergodic_rate_is_one_over_n() {
        let m = circle32();
        let mut r = rng(37);
        let reg = Region::parse("0-23", 32).unwrap();
        let p1 = random_jet_in_region(&m, 2, &reg, 0.7, &mut r).unwrap();
        let p2 = random_jet_in_region(&m, 2, &reg, 0.9, &mut r).unwrap();
        let p3 = random_jet_in_region(&m, 2, &reg, 0.7, &mut r).unwrap();
        let mut pts = Vec::new();
        let mut n = 8usize;
        while n <= 512 {
            let (first, second) =
                ergodic_limit(&Cocycle::MaurerCartan, &p1, &p2, &p3, n).unwrap();
            let d = first.sub(&second).unwrap().norm();
            pts.push(((n as f64).ln(), d.ln()));
            n *= 2;
        }
        let slope = least_squares_slope(&pts);
        assert!(
            (slope + 1.0).abs() < 0.15,
            "log-log slope {slope} not within −1 ± 0.15"
        );
    }

    fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn ergodic_limit_term_independent_of_psi3() {
        let m = circle32();
        let mut r = rng(41);
        let reg = Region::parse("0-23", 32).unwrap();
        let p1 = random_jet_in_region(&m, 2, &reg, 0.7, &mut r).unwrap();
        let p2 = random_jet_in_region(&m, 2, &reg, 0.9, &mut r).unwrap();
        let p3a = random_jet_in_region(&m, 2, &reg, 0.7, &mut r).unwrap();
        let p3b = random_jet_in_region(&m, 2, &reg, 0.7, &mut r).unwrap();
        let (_, la) = ergodic_limit(&Cocycle::MaurerCartan, &p1, &p2, &p3a, 16).unwrap();
        let (_, lb) = ergodic_limit(&Cocycle::MaurerCartan, &p1, &p2, &p3b, 16).unwrap();
        assert!(la.sub(&lb).unwrap().norm() <= 1e-10);
    }

    #[test]
    fn coboundary_fit_recovers_true_coboundary() {
        let m = circle32();
        let mut r = rng(43);
        let v0 = AlgebraField::random_in_region(&m, 2, &Region::all(32), 1.0, &mut r)
            .unwrap()
            .differential();
        let jets: Vec<GaugeJet> = (0..8)
            .map(|_| random_jet_in_region(&m, 2, &Region::all(32), 0.9, &mut r).unwrap())
            .collect();
        let samples =
            CocycleSamples::from_cocycle(&Cocycle::Coboundary(v0.clone()), &jets).unwrap();
        let (_, residual) = coboundary_fit(&samples).unwrap();
        assert!(residual <= 1e-8, "true coboundary residual {residual:.3e}");
    }

    #[test]
    fn coboundary_fit_detects_nontrivial_cocycle() {
        let m = circle32();
        let mut r = rng(47);
        let b = su_basis(2).unwrap();
        let dir = b.elems[b.cartan_idx[0]].scale(1.0);
        let f = bump_algebra_field(&m, 9, 1.5, &dir).unwrap();
        let dphi = f.differential();
        // abelian one-parameter family e^{kφ} plus generic jets
        let mut jets: Vec<GaugeJet> = (1..=4)
            .map(|k| jet_from_algebra_field(&f, k as f64))
            .collect();
        for _ in 0..4 {
            jets.push(random_jet_in_region(&m, 2, &Region::all(32), 0.8, &mut r).unwrap());
        }
        let samples = CocycleSamples::from_cocycle(&Cocycle::MaurerCartan, &jets).unwrap();
        let (_, residual) = coboundary_fit(&samples).unwrap();
        assert!(
            residual >= 0.5 * dphi.norm(),
            "β-residual {residual:.3e} below 0.5·‖dφ‖ = {:.3e}",
            0.5 * dphi.norm()
        );
    }

    #[test]
    fn coboundary_fit_degenerate_all_trivial() {
        let m = circle32();
        let jets = vec![GaugeJet::identity(&m, 2); 3];
        let samples = CocycleSamples::from_cocycle(&Cocycle::MaurerCartan, &jets).unwrap();
        let (v, residual) = coboundary_fit(&samples).unwrap();
        assert!(v.norm() < 1e-12);
        assert!(residual < 1e-12);
    }
}
