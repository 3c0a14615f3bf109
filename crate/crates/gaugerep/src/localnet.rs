//! The local net O ↦ M(O): locality, conjugation of type (S) operators by
//! the energy representation, commutant constraints, totality ranks,
//! near-identity factorization, tensor factorization over regions and the
//! vacuum cyclicity gap.
//!
//! Discrete conventions: on a finite site set interior and closure
//! coincide with the set itself, so the interior-emptiness condition on
//! `supp(b) ∩ O` is modeled as exact emptiness of the intersection.

use num_complex::Complex64;
use rand::Rng;

use crate::cocycle::{beta, v_apply, v_matrix};
use crate::error::{Error, Result};
use crate::fock::{cinner, exp_inner, haar_unitary, types_compose, CoherentVec, TypeS};
use crate::lattice::{
    h_dim, jet_from_algebra_field, jet_mul, AlgebraField, GaugeJet, OneForm, Region,
    SampledManifold,
};
use crate::lie::{
    ad_matrix, alg_exp, alg_log, dexp_right, dexp_right_inv, matrix_from_coords_complex, RootDecomposition,
};
use crate::{CMat, CVec, RMat, RVec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coordinate indices of H belonging to the sites of a region.
pub fn region_indices(mani: &SampledManifold, n: usize, region: &Region) -> Vec<usize> {
    let dim_g = n * n - 1;
    let td = mani.tangent_dim();
    let mut idx = Vec::with_capacity(region.len() * td * dim_g);
    for s in region.iter() {
        for mu in 0..td {
            for i in 0..dim_g {
                idx.push((s * td + mu) * dim_g + i);
            }
        }
    }
    idx
}

/// Diagonal site-block projector onto H(O).
pub fn subspace_projector(mani: &SampledManifold, n: usize, region: &Region) -> RMat {
    let d = h_dim(mani, n);
    let mut p = RMat::zeros(d, d);
    for i in region_indices(mani, n, region) {
        p[(i, i)] = 1.0;
    }
    p
}

/// Generators of M(O): jets supported in O with a neighborhood parameter ε.
#[derive(Debug, Clone)]
pub struct LocalGeneratorSet {
    pub region: Region,
    pub jets: Vec<GaugeJet>,
    pub epsilon: f64,
}

impl LocalGeneratorSet {
    pub fn new(region: Region, jets: Vec<GaugeJet>, epsilon: f64) -> Result<Self> {
        for j in &jets {
            if !j.support().is_subset_of(&region) {
                return Err(Error::Numerical(
                    "generator support not contained in the region".into(),
                ));
            }
        }
        Ok(Self {
            region,
            jets,
            epsilon,
        })
    }

    /// Largest deviation of a generator from the identity (the N₀ metric).
    pub fn max_deviation(&self) -> f64 {
        self.jets.iter().map(GaugeJet::deviation).fold(0.0, f64::max)
    }

    pub fn all_within_epsilon(&self) -> bool {
        self.max_deviation() <= self.epsilon
    }
}

/// Commutation residual of the energy representatives of two jets, phases
/// included: zero (to rounding) for disjoint supports.
pub fn locality_check(psi1: &GaugeJet, psi2: &GaugeJet) -> Result<f64> {
    let u1 = crate::fock::energy_rep(psi1);
    let u2 = crate::fock::energy_rep(psi2);
    let lhs = types_compose(&u1, &u2)?;
    let rhs = types_compose(&u2, &u1)?;
    Ok(lhs.distance(&rhs))
}

/// Conjugation of a type (S) operator by the energy representation, in
/// closed form:
///
/// `U(ψ)·U_{A,b,c}·U(ψ)⁻¹ = e^{iθ(ψ,A,b)}·U_{A^ψ, b^ψ, c}` with
/// `A^ψ = V A V⁻¹`, `b^ψ = β + V b − V A V⁻¹ β` and
/// `θ = Im{⟨β, Vb⟩ − ⟨β + Vb, VAV⁻¹β⟩}`.
pub fn conjugate_types(psi: &GaugeJet, u: &TypeS) -> Result<(TypeS, f64)> {
    let vm = v_matrix(psi);
    let d = vm.nrows();
    if d != u.dim() {
        return Err(Error::DimensionMismatch {
            left: d,
            right: u.dim(),
        });
    }
    let v = CMat::from_fn(d, d, |i, j| c(vm[(i, j)], 0.0));
    let vt = v.transpose(); // V real orthogonal: V⁻¹ = Vᵀ
    let bpsi = beta(psi).hvec();
    let vav = &v * u.a() * &vt;
    let vb = &v * u.b();
    let vavb = &vav * &bpsi;
    let a_new = vav;
    let b_new = &bpsi + &vb - &vavb;
    let theta = (cinner(&bpsi, &vb) - cinner(&(&bpsi + &vb), &vavb)).im;
    let c_new = u.c() * Complex64::from_polar(1.0, theta);
    Ok((TypeS::from_parts_unchecked(a_new, b_new, c_new), theta))
}

/// Residual bundle for the commutant constraints of a type (S) operator
/// against a local generator family.
#[derive(Debug, Clone)]
pub struct CommutantReport {
    /// ‖(A − I)·P_O‖ — A must fix H(O).
    pub fixes_local: f64,
    /// max over test fields of ‖(A − I)dφ − [φ, b]‖ — the bracket constraint.
    pub bracket: f64,
    /// ‖P_O·b‖ — b must be supported in the complement.
    pub supp_b: f64,
    /// ‖P_O·A·P_{O′}‖ — A must leave H(O′) invariant.
    pub invariance: f64,
    /// max over generators of |θ(ψ, A, b)|.
    pub phase: f64,
    /// max over generators of the triple distance ‖U^ψ − U‖.
    pub commute: f64,
    pub gens_tested: usize,
    pub fields_tested: usize,
}

impl CommutantReport {
    pub fn max_residual(&self) -> f64 {
        self.fixes_local
            .max(self.bracket)
            .max(self.supp_b)
            .max(self.invariance)
            .max(self.phase)
            .max(self.commute)
    }
}

/// Pointwise bracket `[φ, v]` on H-coordinates (complex), sitewise through
/// the adjoint representation.
pub fn pointwise_bracket(field: &AlgebraField, v: &CVec) -> Result<CVec> {
    let mani = field.manifold();
    let n = field.group_dim();
    let dim_g = n * n - 1;
    let td = mani.tangent_dim();
    if v.len() != h_dim(mani, n) {
        return Err(Error::DimensionMismatch {
            left: v.len(),
            right: h_dim(mani, n),
        });
    }
    let mut out = CVec::zeros(v.len());
    for s in 0..mani.sites() {
        let ad = ad_matrix(field.value(s));
        for mu in 0..td {
            let off = (s * td + mu) * dim_g;
            for i in 0..dim_g {
                let mut acc = c(0.0, 0.0);
                for j in 0..dim_g {
                    acc += c(ad[(i, j)], 0.0) * v[off + j];
                }
                out[off + i] = acc;
            }
        }
    }
    Ok(out)
}

/// Evaluates every commutant-constraint residual of `u` for the region O:
/// the conjugation residual over the generators, the bracket constraint
/// over the test fields, the support condition on b and the invariance of
/// H(O′) under A.
pub fn commutant_constraints(
    region: &Region,
    u: &TypeS,
    gens: &LocalGeneratorSet,
    fields: &[AlgebraField],
) -> Result<CommutantReport> {
    let first = gens
        .jets
        .first()
        .ok_or_else(|| Error::Numerical("commutant check needs at least one generator".into()))?;
    let mani = first.manifold().clone();
    let n = first.group_dim();
    if !gens.region.is_subset_of(region) {
        return Err(Error::Numerical("generators outside the region".into()));
    }
    let idx_o = region_indices(&mani, n, region);
    let idx_oc = region_indices(&mani, n, &region.complement());

    let mut commute = 0.0_f64;
    let mut phase = 0.0_f64;
    for psi in &gens.jets {
        let (conj, theta) = conjugate_types(psi, u)?;
        commute = commute.max(conj.distance(u));
        phase = phase.max(theta.abs());
    }

    let mut bracket = 0.0_f64;
    for f in fields {
        if !f.support().is_subset_of(region) {
            return Err(Error::Numerical("test field outside the region".into()));
        }
        let dphi = f.differential().hvec();
        let lhs = u.a() * &dphi - &dphi;
        let rhs = pointwise_bracket(f, u.b())?;
        bracket = bracket.max((lhs - rhs).norm());
    }

    let supp_b = idx_o.iter().map(|&i| u.b()[i].norm_sqr()).sum::<f64>().sqrt();

    let a = u.a();
    let eye = CMat::identity(a.nrows(), a.ncols());
    let mut fixes = 0.0_f64;
    for &j in &idx_o {
        for i in 0..a.nrows() {
            fixes += (a[(i, j)] - eye[(i, j)]).norm_sqr();
        }
    }
    let fixes_local = fixes.sqrt();

    let mut inv = 0.0_f64;
    for &i in &idx_o {
        for &j in &idx_oc {
            inv += a[(i, j)].norm_sqr();
        }
    }
    let invariance = inv.sqrt();

    Ok(CommutantReport {
        fixes_local,
        bracket,
        supp_b,
        invariance,
        phase,
        commute,
        gens_tested: gens.jets.len(),
        fields_tested: fields.len(),
    })
}

/// Expands b in root components over the complexified fiber and returns
/// the largest norm of `⟨α, φ⟩·b^α` restricted to O over all roots and
/// Cartan-valued test fields.
pub fn root_constraint_check(
    region: &Region,
    b: &CVec,
    decomp: &RootDecomposition,
    fields: &[AlgebraField],
) -> Result<f64> {
    let n = decomp.n;
    let dim_g = n * n - 1;
    let mut worst = 0.0_f64;
    for f in fields {
        let mani = f.manifold();
        let td = mani.tangent_dim();
        if b.len() != h_dim(mani, n) {
            return Err(Error::DimensionMismatch {
                left: b.len(),
                right: h_dim(mani, n),
            });
        }
        for (r, pair) in decomp.root_pairs.iter().enumerate() {
            let (pj, pk) = *pair;
            let scale = decomp.root_spaces[r][0].norm();
            let mut acc = 0.0_f64;
            for s in region.iter() {
                let phi = f.value(s);
                // test fields must be Cartan-valued (diagonal)
                for a_ in 0..n {
                    for b_ in 0..n {
                        if a_ != b_ && phi.matrix()[(a_, b_)].norm() > 1e-12 {
                            return Err(Error::Numerical(
                                "root constraint test field must be Cartan-valued".into(),
                            ));
                        }
                    }
                }
                let alpha = phi.matrix()[(pj, pj)].im - phi.matrix()[(pk, pk)].im;
                for mu in 0..td {
                    let off = (s * td + mu) * dim_g;
                    let block = CVec::from_fn(dim_g, |i, _| b[off + i]);
                    let y = matrix_from_coords_complex(n, &block)?;
                    let comp = y[(pj, pk)];
                    acc += (alpha * alpha) * comp.norm_sqr() * scale * scale;
                }
            }
            worst = worst.max(acc.sqrt());
        }
    }
    Ok(worst)
}

/// Sampling mode for the totality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotalityMode {
    /// Samples β(ψ) with supp(ψ) ⊂ O.
    Beta,
    /// Samples V(ψ)dφ with supp(ψ), supp(φ) ⊂ O, checking per pair the
    /// splitting identity V(ψ)dφ = β(ψ·e^φ) − β(ψ).
    VDphi,
}

/// Numerical rank of sampled totality families in H(O); returns
/// (rank, dim H(O)).
pub fn totality_rank(
    mani: &SampledManifold,
    n: usize,
    region: &Region,
    mode: TotalityMode,
    count: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    use rand::SeedableRng;
    let dim_g = n * n - 1;
    let dim_o = region.len() * mani.tangent_dim() * dim_g;
    if region.is_empty() {
        return Ok((0, 0));
    }
    if count < 2 * dim_o {
        return Err(Error::Numerical(format!(
            "totality sampling needs count >= {}, got {count}",
            2 * dim_o
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let idx = region_indices(mani, n, region);
    let mut m = RMat::zeros(dim_o, count);
    for col in 0..count {
        let sample: RVec = match mode {
            TotalityMode::Beta => {
                let psi = crate::lattice::random_jet_in_region(mani, n, region, 0.9, &mut rng)?;
                beta(&psi).coords()
            }
            TotalityMode::VDphi => {
                let psi = crate::lattice::random_jet_in_region(mani, n, region, 0.9, &mut rng)?;
                let f = AlgebraField::random_ray_in_region(mani, n, region, 0.9, &mut rng)?;
                let vdphi = v_apply(&psi, &f.differential())?;
                // ◊: V(ψ)dφ = β(ψ·e^φ) − β(ψ), exact for ray fields
                let efield = jet_from_algebra_field(&f, 1.0);
                let split = beta(&jet_mul(&psi, &efield)?)
                    .sub(&beta(&psi))?
                    .sub(&vdphi)?
                    .norm();
                if split > 1e-12 {
                    return Err(Error::Numerical(format!(
                        "splitting identity residual {split:.3e}"
                    )));
                }
                vdphi.coords()
            }
        };
        let mut nrm = 0.0_f64;
        for &i in &idx {
            nrm += sample[i] * sample[i];
        }
        let nrm = nrm.sqrt();
        if nrm > 0.0 {
            for (row, &i) in idx.iter().enumerate() {
                m[(row, col)] = sample[i] / nrm;
            }
        }
    }
    let svd = m.svd(false, false);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-8).count();
    Ok((rank, dim_o))
}

/// Factors ψ through the principal logarithm into m equal near-identity
/// jets whose product reproduces ψ. Every factor must lie within the ε
/// neighborhood of the identity.
pub fn near_identity_factorization(
    psi: &GaugeJet,
    m: usize,
    epsilon: f64,
) -> Result<Vec<GaugeJet>> {
    if m == 0 {
        return Err(Error::Numerical("factor count must be positive".into()));
    }
    let mani = psi.manifold().clone();
    let n = psi.group_dim();
    let td = mani.tangent_dim();
    let inv_m = 1.0 / m as f64;
    let mut gs = Vec::with_capacity(mani.sites());
    let mut bs = Vec::with_capacity(mani.sites());
    for s in 0..mani.sites() {
        let x = alg_log(psi.group_value(s))?;
        let xm = x.scale(inv_m);
        gs.push(alg_exp(&xm));
        let mut site_b = Vec::with_capacity(td);
        for mu in 0..td {
            // b = f(ad_X)(dX) pins the derivative of x ↦ log ψ
            let dx = dexp_right_inv(&x, psi.b_component(s, mu))?;
            site_b.push(dexp_right(&xm, &dx.scale(inv_m)));
        }
        bs.push(site_b);
    }
    let factor = GaugeJet::from_site_data(&mani, n, gs, bs)?;
    let dev = factor.deviation();
    if dev > epsilon {
        return Err(Error::EpsilonNotReached {
            max_deviation: dev,
            epsilon,
        });
    }
    Ok(vec![factor; m])
}

/// Coherent data split across (H(O), H(O′)):
/// `Exp(ω_O + ω_{O′}) ↔ Exp(ω_O) ⊗ Exp(ω_{O′})` termwise.
#[derive(Debug, Clone)]
pub struct TensorSplit {
    terms: Vec<(Complex64, CVec, CVec)>,
}

impl TensorSplit {
    pub fn terms(&self) -> &[(Complex64, CVec, CVec)] {
        &self.terms
    }

    /// Pairing `Σᵢⱼ λᵢ·conj(μⱼ)·e^{⟨xᵢ,yⱼ⟩_O}·e^{⟨xᵢ,yⱼ⟩_{O′}}`.
    pub fn pairing(&self, other: &TensorSplit) -> Result<Complex64> {
        let mut acc = c(0.0, 0.0);
        for (l, xo, xc) in &self.terms {
            for (m, yo, yc) in &other.terms {
                acc += l * m.conj() * exp_inner(xo, yo)? * exp_inner(xc, yc)?;
            }
        }
        Ok(acc)
    }
}

/// Splits every term of a coherent vector into its H(O) and H(O′) blocks.
pub fn tensor_factorize(
    v: &CoherentVec,
    mani: &SampledManifold,
    n: usize,
    region: &Region,
) -> Result<TensorSplit> {
    let idx_o = region_indices(mani, n, region);
    let idx_oc = region_indices(mani, n, &region.complement());
    let d = h_dim(mani, n);
    let mut terms = Vec::with_capacity(v.terms().len());
    for (l, x) in v.terms() {
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: d,
            });
        }
        let xo = CVec::from_fn(idx_o.len(), |i, _| x[idx_o[i]]);
        let xc = CVec::from_fn(idx_oc.len(), |i, _| x[idx_oc[i]]);
        terms.push((*l, xo, xc));
    }
    Ok(TensorSplit { terms })
}

/// Vacuum-orbit words: products of the generators (breadth-first, identity
/// included), deduplicated by their cocycle value, capped at `max_orbit`.
pub fn orbit_jets(
    mani: &SampledManifold,
    n: usize,
    gens: &[GaugeJet],
    max_orbit: usize,
) -> Result<Vec<GaugeJet>> {
    let mut words = vec![GaugeJet::identity(mani, n)];
    let mut frontier = words.clone();
    'grow: while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for g in gens {
                let prod = jet_mul(w, g)?;
                let bp = beta(&prod).coords();
                let fresh = words
                    .iter()
                    .chain(next.iter())
                    .all(|u: &GaugeJet| (beta(u).coords() - &bp).norm() > 1e-8);
                if fresh {
                    next.push(prod);
                    if words.len() + next.len() >= max_orbit {
                        words.extend(next);
                        break 'grow;
                    }
                }
            }
        }
        words.extend(next.clone());
        frontier = next;
    }
    Ok(words)
}

/// Measured squared Gram-projection distance of Exp(ω′) to the span of the
/// vacuum orbit of the generators, together with the analytic floor
/// `e^{‖ω′‖²} − 1` from the tensor factorization over (O, O′).
pub fn vacuum_cyclicity_gap(
    region: &Region,
    gens: &[GaugeJet],
    omega_c: &OneForm,
    max_orbit: usize,
) -> Result<(f64, f64)> {
    if omega_c.norm() == 0.0 {
        return Err(Error::Numerical(
            "cyclicity gap needs a nonzero target in H(O')".into(),
        ));
    }
    if !omega_c.support().is_subset_of(&region.complement()) {
        return Err(Error::Numerical("target not supported in H(O')".into()));
    }
    let mani = omega_c.manifold().clone();
    let n = omega_c.group_dim();
    for g in gens {
        if !g.support().is_subset_of(region) {
            return Err(Error::Numerical("generator not supported in O".into()));
        }
    }
    let words = orbit_jets(&mani, n, gens, max_orbit)?;
    let betas: Vec<CVec> = words.iter().map(|w| beta(w).hvec()).collect();
    let t = omega_c.hvec();
    let k = betas.len();
    let mut gram = CMat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = exp_inner(&betas[i], &betas[j])?;
        }
    }
    let cvec = CVec::from_fn(k, |i, _| exp_inner(&betas[i], &t).unwrap());
    // pseudo-inverse through the eigendecomposition of the PSD Gram
    let eig = gram.symmetric_eigen();
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let w = eig.eigenvectors.adjoint() * &cvec;
    let mut proj = 0.0_f64;
    for i in 0..k {
        if eig.eigenvalues[i] > 1e-12 * lmax {
            proj += w[i].norm_sqr() / eig.eigenvalues[i];
        }
    }
    let t2 = omega_c.norm().powi(2);
    let measured = t2.exp() - proj;
    let floor = t2.exp() - 1.0;
    Ok((measured, floor))
}

/// Kernel dimension of the map `Q ↦ QΩ` on the span of the energy
/// representatives of the given jets: returns (#generators, kernel dim).
pub fn separating_kernel(gens: &[GaugeJet]) -> Result<(usize, usize)> {
    if gens.is_empty() {
        return Ok((0, 0));
    }
    let betas: Vec<CVec> = gens.iter().map(|g| beta(g).hvec()).collect();
    let rank = crate::fock::gram_rank(&betas, 1e-10)?;
    Ok((gens.len(), gens.len() - rank))
}

/// A member of A(O′): identity on H(O), Haar-random unitary block on
/// H(O′), b supported in O′, c = 1.
pub fn ao_prime_element<R: Rng>(
    mani: &SampledManifold,
    n: usize,
    region: &Region,
    b_scale: f64,
    rng: &mut R,
) -> TypeS {
    let d = h_dim(mani, n);
    let idx_oc = region_indices(mani, n, &region.complement());
    let block = haar_unitary(idx_oc.len(), rng);
    let mut a = CMat::identity(d, d);
    for (bi, &i) in idx_oc.iter().enumerate() {
        for (bj, &j) in idx_oc.iter().enumerate() {
            a[(i, j)] = block[(bi, bj)];
        }
    }
    let braw = crate::fock::random_hvec(idx_oc.len(), b_scale, rng);
    let mut b = CVec::zeros(d);
    for (bi, &i) in idx_oc.iter().enumerate() {
        b[i] = braw[bi];
    }
    TypeS::from_parts_unchecked(a, b, c(1.0, 0.0))
}

/// Unitary rotation by `angle` in the plane of coordinates (i, j).
pub fn plane_rotation(dim: usize, i: usize, j: usize, angle: f64) -> CMat {
    let mut m = CMat::identity(dim, dim);
    m[(i, i)] = c(angle.cos(), 0.0);
    m[(j, j)] = c(angle.cos(), 0.0);
    m[(i, j)] = c(-angle.sin(), 0.0);
    m[(j, i)] = c(angle.sin(), 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coh_inner, default_grid, energy_rep, op_equal, types_apply, types_inverse};
    use crate::lattice::{bump_algebra_field, random_jet_in_region};
    use crate::lie::{cartan_root_decompose, su_basis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn circle(sites: usize) -> SampledManifold {
        SampledManifold::circle(sites).unwrap()
    }

    #[test]
    fn subspace_projectors_sum_to_identity() {
        let m = circle(16);
        let o = Region::parse("0-5", 16).unwrap();
        let p = subspace_projector(&m, 2, &o);
        let pc = subspace_projector(&m, 2, &o.complement());
        let d = h_dim(&m, 2);
        assert_eq!(&p + &pc, RMat::identity(d, d));
        assert_eq!(p.trace() as usize, o.len() * 1 * 3);
        assert_eq!(
            subspace_projector(&m, 2, &Region::all(16)),
            RMat::identity(d, d)
        );
        assert_eq!(
            subspace_projector(&m, 2, &Region::empty(16)),
            RMat::zeros(d, d)
        );
    }

    #[test]
    fn locality_zero_for_disjoint_supports() {
        let m = circle(16);
        let mut r = rng(3);
        let p1 = random_jet_in_region(&m, 2, &Region::parse("0-5", 16).unwrap(), 1.0, &mut r)
            .unwrap();
        let p2 = random_jet_in_region(&m, 2, &Region::parse("8-13", 16).unwrap(), 1.0, &mut r)
            .unwrap();
        let resid = locality_check(&p1, &p2).unwrap();
        assert!(resid <= 1e-12, "disjoint commutator residual {resid:.3e}");
        let e = GaugeJet::identity(&m, 2);
        assert!(locality_check(&p1, &e).unwrap() <= 1e-14);
    }

    #[test]
    fn locality_detects_overlapping_noncommuting_bumps() {
        let m = circle(16);
        let b = su_basis(2).unwrap();
        let f1 = bump_algebra_field(&m, 4, 1.5, &b.elems[0].scale(1.0)).unwrap();
        let f2 = bump_algebra_field(&m, 5, 1.5, &b.elems[1].scale(1.0)).unwrap();
        let p1 = jet_from_algebra_field(&f1, 1.0);
        let p2 = jet_from_algebra_field(&f2, 1.0);
        let resid = locality_check(&p1, &p2).unwrap();
        assert!(resid > 1e-4, "overlap residual {resid:.3e} too small");
    }

    #[test]
    fn conjugation_two_path_agreement() {
        let m = circle(12);
        let mut r = rng(7);
        for _ in 0..4 {
            let psi = random_jet_in_region(&m, 2, &Region::parse("0-7", 12).unwrap(), 0.9, &mut r)
                .unwrap();
            let u = crate::fock::random_types(h_dim(&m, 2), 0.8, &mut r);
            let (formula, _) = conjugate_types(&psi, &u).unwrap();
            let urep = energy_rep(&psi);
            let comp =
                types_compose(&urep, &types_compose(&u, &types_inverse(&urep)).unwrap()).unwrap();
            assert!(
                formula.distance(&comp) < 1e-10,
                "two-path distance {:.3e}",
                formula.distance(&comp)
            );
        }
    }

    #[test]
    fn conjugation_by_identity_has_zero_phase() {
        let m = circle(12);
        let mut r = rng(11);
        let u = crate::fock::random_types(h_dim(&m, 2), 1.0, &mut r);
        let e = GaugeJet::identity(&m, 2);
        let (conj, theta) = conjugate_types(&e, &u).unwrap();
        assert_eq!(theta, 0.0, "θ(1, A, b) = 0");
        assert!(conj.distance(&u) < 1e-13);
    }

    #[test]
    fn conjugation_of_identity_operator() {
        let m = circle(12);
        let mut r = rng(13);
        let psi = random_jet_in_region(&m, 2, &Region::parse("2-9", 12).unwrap(), 1.0, &mut r)
            .unwrap();
        let (conj, theta) = conjugate_types(&psi, &TypeS::identity(h_dim(&m, 2))).unwrap();
        assert!(conj.distance(&TypeS::identity(h_dim(&m, 2))) < 1e-12);
        assert!(theta.abs() < 1e-13);
    }

    fn commutant_setup(
        seed: u64,
    ) -> (
        SampledManifold,
        Region,
        LocalGeneratorSet,
        Vec<AlgebraField>,
        TypeS,
    ) {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let mut r = rng(seed);
        let jets: Vec<GaugeJet> = (0..4)
            .map(|_| random_jet_in_region(&m, 2, &o, 0.03, &mut r).unwrap())
            .collect();
        let gens = LocalGeneratorSet::new(o.clone(), jets, 0.2).unwrap();
        assert!(gens.all_within_epsilon());
        let b = su_basis(2).unwrap();
        let fields: Vec<AlgebraField> = vec![
            bump_algebra_field(&m, 2, 1.4, &b.elems[b.cartan_idx[0]].scale(0.8)).unwrap(),
            bump_algebra_field(&m, 3, 1.2, &b.elems[0].scale(0.7)).unwrap(),
        ];
        for f in &fields {
            assert!(f.support().is_subset_of(&o));
        }
        let u = ao_prime_element(&m, 2, &o, 0.9, &mut r);
        (m, o, gens, fields, u)
    }

    #[test]
    fn commutant_member_passes_all_slots() {
        let (_, o, gens, fields, u) = commutant_setup(17);
        let report = commutant_constraints(&o, &u, &gens, &fields).unwrap();
        assert!(
            report.max_residual() <= 1e-10,
            "A(O') member residuals: {report:?}"
        );
    }

    #[test]
    fn commutant_identity_operator_is_clean() {
        let (m, o, gens, fields, _) = commutant_setup(19);
        let report =
            commutant_constraints(&o, &TypeS::identity(h_dim(&m, 2)), &gens, &fields).unwrap();
        assert!(report.max_residual() <= 1e-12, "{report:?}");
    }

    #[test]
    fn commutant_detects_planted_rotation_in_local_block() {
        let (m, o, gens, fields, u) = commutant_setup(23);
        let idx_o = region_indices(&m, 2, &o);
        let rot = plane_rotation(h_dim(&m, 2), idx_o[0], idx_o[1], 1e-3);
        let planted = TypeS::from_parts_unchecked(u.a() * rot, u.b().clone(), u.c());
        let report = commutant_constraints(&o, &planted, &gens, &fields).unwrap();
        assert!(report.fixes_local >= 1e-6, "♥ slot missed: {report:?}");
        assert!(report.commute >= 1e-6, "commute slot missed: {report:?}");
    }

    #[test]
    fn commutant_detects_planted_b_support_violation() {
        let (m, o, gens, fields, u) = commutant_setup(29);
        let idx_o = region_indices(&m, 2, &o);
        let mut b = u.b().clone();
        // Cartan-direction component inside O: silent in ♠, loud in supp_b
        b[idx_o[2]] += c(1e-3, 0.0);
        let planted = TypeS::from_parts_unchecked(u.a().clone(), b, u.c());
        let report = commutant_constraints(&o, &planted, &gens, &fields).unwrap();
        assert!(report.supp_b >= 1e-6, "supp_b slot missed: {report:?}");
    }

    #[test]
    fn commutant_detects_planted_invariance_violation() {
        let (m, o, gens, fields, u) = commutant_setup(31);
        let idx_o = region_indices(&m, 2, &o);
        let idx_oc = region_indices(&m, 2, &o.complement());
        let rot = plane_rotation(h_dim(&m, 2), idx_o[0], idx_oc[0], 1e-3);
        let planted = TypeS::from_parts_unchecked(rot * u.a(), u.b().clone(), u.c());
        let report = commutant_constraints(&o, &planted, &gens, &fields).unwrap();
        assert!(report.invariance >= 1e-6, "invariance slot missed: {report:?}");
    }

    #[test]
    fn bracket_constraint_fires_for_root_component() {
        // b with a root-space component inside O against a Cartan field
        let (m, o, gens, fields, u) = commutant_setup(37);
        let dec = cartan_root_decompose(2).unwrap();
        let e_alpha = &dec.root_spaces[0][0];
        let idx_o = region_indices(&m, 2, &o);
        let mut b = u.b().clone();
        for i in 0..3 {
            b[idx_o[6 + i]] += e_alpha[i] * c(1e-3, 0.0);
        }
        let planted = TypeS::from_parts_unchecked(u.a().clone(), b, u.c());
        let report = commutant_constraints(&o, &planted, &gens, &fields).unwrap();
        assert!(report.bracket >= 1e-6, "♠ slot missed: {report:?}");
        assert!(report.supp_b >= 1e-6);
    }

    #[test]
    fn root_constraint_vanishes_off_region_and_for_cartan_b() {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let dec = cartan_root_decompose(2).unwrap();
        let b = su_basis(2).unwrap();
        let fields =
            vec![bump_algebra_field(&m, 2, 1.4, &b.elems[b.cartan_idx[0]].scale(0.9)).unwrap()];
        // b supported in O′
        let mut r = rng(41);
        let u = ao_prime_element(&m, 2, &o, 1.0, &mut r);
        let resid = root_constraint_check(&o, u.b(), &dec, &fields).unwrap();
        assert_eq!(resid, 0.0);
        // Cartan-valued b inside O has no root component
        let d = h_dim(&m, 2);
        let idx_o = region_indices(&m, 2, &o);
        let mut bc = CVec::zeros(d);
        bc[idx_o[2]] = c(0.7, 0.0); // cartan coordinate (index 2 of the block)
        let resid = root_constraint_check(&o, &bc, &dec, &fields).unwrap();
        assert!(resid < 1e-14);
    }

    #[test]
    fn root_constraint_detects_planted_component() {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let dec = cartan_root_decompose(2).unwrap();
        let b = su_basis(2).unwrap();
        let field =
            bump_algebra_field(&m, 2, 1.4, &b.elems[b.cartan_idx[0]].scale(0.9)).unwrap();
        let d = h_dim(&m, 2);
        let idx_all = region_indices(&m, 2, &Region::all(12));
        let _ = idx_all;
        let e_alpha = &dec.root_spaces[0][0];
        let site = 2usize; // inside O, where the field is nonzero
        let mut bc = CVec::zeros(d);
        for i in 0..3 {
            bc[site * 3 + i] = e_alpha[i] * c(0.5, 0.0);
        }
        let resid = root_constraint_check(&o, &bc, &dec, &[field.clone()]).unwrap();
        // residual equals |α(φ(x))|·‖b^α‖ at the planted site
        let alpha = field.value(site).matrix()[(0, 0)].im
            - field.value(site).matrix()[(1, 1)].im;
        let want = alpha.abs() * 0.5 * e_alpha.norm();
        assert!(
            (resid - want).abs() <= 1e-10 * (1.0 + want),
            "resid {resid} want {want}"
        );
    }

    #[test]
    fn totality_ranks_match_dimension() {
        let m = circle(12);
        for sites in [1usize, 3] {
            let o = Region::new(0..sites, 12).unwrap();
            let dim_o = 3 * sites;
            let (rank_b, d1) =
                totality_rank(&m, 2, &o, TotalityMode::Beta, 2 * dim_o + 4, 51).unwrap();
            let (rank_v, d2) =
                totality_rank(&m, 2, &o, TotalityMode::VDphi, 2 * dim_o + 4, 53).unwrap();
            assert_eq!(d1, dim_o);
            assert_eq!(d2, dim_o);
            assert_eq!(rank_b, dim_o, "beta samples span H(O)");
            assert_eq!(rank_v, dim_o, "V dφ samples span H(O)");
        }
        assert_eq!(
            totality_rank(&m, 2, &Region::empty(12), TotalityMode::Beta, 8, 55).unwrap(),
            (0, 0)
        );
    }

    #[test]
    fn totality_rejects_undersampling() {
        let m = circle(12);
        let o = Region::parse("0-2", 12).unwrap();
        assert!(totality_rank(&m, 2, &o, TotalityMode::Beta, 3, 57).is_err());
    }

    #[test]
    fn factorization_reconstructs_the_jet() {
        let m = circle(16);
        let b = su_basis(2).unwrap();
        let dir = b.elems[0].add(&b.elems[b.cartan_idx[0]]).scale(0.8);
        let f = bump_algebra_field(&m, 6, 1.8, &dir).unwrap();
        let psi = jet_from_algebra_field(&f, 1.0);
        let factors = near_identity_factorization(&psi, 32, 0.2).unwrap();
        assert_eq!(factors.len(), 32);
        for fct in &factors {
            assert!(fct.deviation() <= 0.2);
        }
        let mut prod = GaugeJet::identity(&m, 2);
        for fct in &factors {
            prod = jet_mul(&prod, fct).unwrap();
        }
        for s in 0..16 {
            assert!(
                (prod.group_value(s).matrix() - psi.group_value(s).matrix()).norm() <= 1e-10
            );
            assert!(prod.b_component(s, 0).sub(psi.b_component(s, 0)).norm() <= 1e-10);
        }
    }

    #[test]
    fn factorization_of_identity_and_abelian_jets() {
        let m = circle(16);
        let e = GaugeJet::identity(&m, 2);
        let factors = near_identity_factorization(&e, 5, 0.1).unwrap();
        assert!(factors.iter().all(GaugeJet::is_identity));
        // abelian: factors are e^{φ/m} with b = dφ/m
        let b = su_basis(2).unwrap();
        let f = bump_algebra_field(&m, 3, 1.5, &b.elems[b.cartan_idx[0]].scale(0.9)).unwrap();
        let psi = jet_from_algebra_field(&f, 1.0);
        let factors = near_identity_factorization(&psi, 8, 0.5).unwrap();
        let expect = jet_from_algebra_field(&f.scale(1.0 / 8.0), 1.0);
        for s in 0..16 {
            assert!(
                (factors[0].group_value(s).matrix() - expect.group_value(s).matrix()).norm()
                    < 1e-12
            );
            assert!(factors[0]
                .b_component(s, 0)
                .sub(expect.b_component(s, 0))
                .norm()
                .abs()
                < 1e-12);
        }
    }

    #[test]
    fn factorization_epsilon_failure() {
        let m = circle(16);
        let b = su_basis(2).unwrap();
        let f = bump_algebra_field(&m, 6, 1.8, &b.elems[0].scale(1.2)).unwrap();
        let psi = jet_from_algebra_field(&f, 1.0);
        assert!(matches!(
            near_identity_factorization(&psi, 2, 0.05),
            Err(Error::EpsilonNotReached { .. })
        ));
    }

    #[test]
    fn tensor_factorization_preserves_pairings() {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let mut r = rng(61);
        let d = h_dim(&m, 2);
        let v = CoherentVec::new(vec![
            (c(0.8, -0.1), crate::fock::random_hvec(d, 1.0, &mut r)),
            (c(-0.2, 0.5), crate::fock::random_hvec(d, 0.8, &mut r)),
        ])
        .unwrap();
        let w = CoherentVec::exp_vector(crate::fock::random_hvec(d, 1.1, &mut r)).unwrap();
        let sv = tensor_factorize(&v, &m, 2, &o).unwrap();
        let sw = tensor_factorize(&w, &m, 2, &o).unwrap();
        let lhs = sv.pairing(&sw).unwrap();
        let rhs = coh_inner(&v, &w).unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn tensor_factorization_on_vacuum_and_local_vectors() {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let d = h_dim(&m, 2);
        let sv = tensor_factorize(&CoherentVec::vacuum(d), &m, 2, &o).unwrap();
        assert!(sv.terms()[0].1.norm() == 0.0 && sv.terms()[0].2.norm() == 0.0);
        // ω supported in O: second factor Exp 0
        let mut r = rng(67);
        let psi = random_jet_in_region(&m, 2, &o, 1.0, &mut r).unwrap();
        let w = CoherentVec::exp_vector(beta(&psi).hvec()).unwrap();
        let sw = tensor_factorize(&w, &m, 2, &o).unwrap();
        assert_eq!(sw.terms()[0].2.norm(), 0.0);
    }

    #[test]
    fn local_operator_acts_only_on_local_factor() {
        // U(ψ), supp ψ ⊂ O, acts as (U|_{Γ(H(O))} ⊗ I)
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let mut r = rng(71);
        let psi = random_jet_in_region(&m, 2, &o, 0.9, &mut r).unwrap();
        let d = h_dim(&m, 2);
        let x = crate::fock::random_hvec(d, 1.0, &mut r);
        let v = CoherentVec::exp_vector(x.clone()).unwrap();
        let uv = types_apply(&energy_rep(&psi), &v).unwrap();
        let split = tensor_factorize(&uv, &m, 2, &o).unwrap();
        let split_v = tensor_factorize(&v, &m, 2, &o).unwrap();
        // the O′ factor is untouched
        assert!((&split.terms()[0].2 - &split_v.terms()[0].2).norm() < 1e-12);
        // the coefficient depends only on the O-part: recompute it from
        // the O-restricted data
        let bo = tensor_factorize(
            &CoherentVec::exp_vector(beta(&psi).hvec()).unwrap(),
            &m,
            2,
            &o,
        )
        .unwrap();
        let bvec = &bo.terms()[0].1;
        let expo = -c(0.5 * bvec.norm().powi(2), 0.0)
            - cinner(&(CMat::from_fn(bvec.len(), bvec.len(), |i, j| {
                let vm = v_matrix(&psi);
                let idx = region_indices(&m, 2, &o);
                c(vm[(idx[i], idx[j])], 0.0)
            }) * &split_v.terms()[0].1), bvec);
        let coeff = expo.exp();
        assert!((split.terms()[0].0 - coeff).norm() < 1e-10);
    }

    #[test]
    fn cyclicity_gap_no_generators_hits_floor_exactly() {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let b = su_basis(2).unwrap();
        // unit-norm ω′ in O′
        let f = bump_algebra_field(&m, 9, 1.3, &b.elems[0]).unwrap();
        let w = f.differential();
        let w = w.scale(1.0 / w.norm());
        assert!(w.support().is_subset_of(&o.complement()));
        let (measured, floor) = vacuum_cyclicity_gap(&o, &[], &w, 64).unwrap();
        assert!((floor - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        assert!((measured - floor).abs() <= 1e-10, "empty-orbit distance is the floor");
    }

    #[test]
    fn cyclicity_gap_monotone_and_floored() {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let mut r = rng(73);
        let gens: Vec<GaugeJet> = (0..3)
            .map(|_| random_jet_in_region(&m, 2, &o, 0.4, &mut r).unwrap())
            .collect();
        let b = su_basis(2).unwrap();
        let f = bump_algebra_field(&m, 9, 1.3, &b.elems[1]).unwrap();
        let w = f.differential();
        let w = w.scale(1.0 / w.norm());
        let mut last = f64::INFINITY;
        for cap in [1usize, 8, 24, 64] {
            let (measured, floor) = vacuum_cyclicity_gap(&o, &gens, &w, cap).unwrap();
            assert!(measured >= floor - 1e-8, "measured {measured} below floor {floor}");
            assert!(measured <= last + 1e-9, "distance should not grow with the orbit");
            last = measured;
        }
    }

    #[test]
    fn cyclicity_gap_rejects_bad_targets() {
        let m = circle(12);
        let o = Region::parse("0-5", 12).unwrap();
        let z = OneForm::zero(&m, 2);
        assert!(vacuum_cyclicity_gap(&o, &[], &z, 8).is_err());
        // supported inside O instead of O′
        let b = su_basis(2).unwrap();
        let f = bump_algebra_field(&m, 2, 1.2, &b.elems[0]).unwrap();
        assert!(vacuum_cyclicity_gap(&o, &[], &f.differential(), 8).is_err());
    }

    #[test]
    fn non_separating_witness() {
        // two jets with the same cocycle value but different group values:
        // Q = U(ψ₁) − U(ψ₂) kills Ω without being zero
        let m = circle(12);
        let mut r = rng(79);
        let o = Region::parse("0-5", 12).unwrap();
        let psi1 = random_jet_in_region(&m, 2, &o, 0.9, &mut r).unwrap();
        let twist = random_jet_in_region(&m, 2, &o, 0.7, &mut r).unwrap();
        let psi2 = GaugeJet::from_site_data(
            &m,
            2,
            (0..12).map(|s| twist.group_value(s).clone()).collect(),
            (0..12).map(|s| vec![psi1.b_component(s, 0).clone()]).collect(),
        )
        .unwrap();
        let (count, kernel) = separating_kernel(&[psi1.clone(), psi2.clone()]).unwrap();
        assert_eq!((count, kernel), (2, 1), "one relation among the two orbit vectors");
        // Q ≠ 0 as an operator
        let u1 = energy_rep(&psi1);
        let u2 = energy_rep(&psi2);
        let l = vec![(c(1.0, 0.0), u1.clone()), (c(-1.0, 0.0), u2.clone())];
        let zero: Vec<(Complex64, TypeS)> = vec![];
        let grid = default_grid(u1.dim(), &[&u1, &u2], 12, 83);
        assert!(op_equal(&l, &zero, &grid).unwrap() > 1e-3);
        // but QΩ = 0
        let d = h_dim(&m, 2);
        let vac = CoherentVec::vacuum(d);
        let q_omega = types_apply(&u1, &vac)
            .unwrap()
            .sub(&types_apply(&u2, &vac).unwrap());
        assert!(crate::fock::coh_norm(&q_omega).unwrap() < 1e-10);
    }
}
