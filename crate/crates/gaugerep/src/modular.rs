//! Standard real subspaces and modular data for the Weyl comparison.
//!
//! Real-linear operators on H ≅ C^d are 2d×2d real matrices acting on the
//! stacked (Re, Im) embedding; the complex structure is the fixed matrix J.
//! For a standard subspace K the canonical involution `s: h + ik ↦ h − ik`
//! is assembled on the basis [K | JK] and its real polar factors (j, δ)
//! satisfy `j² = I`, `jδ^{1/2} = δ^{−1/2}j`, `j(K) = K′`.
//!
//! The gauge-net contrast: a complex subspace H(O) viewed as a real
//! subspace has K ∩ iK = K, so it is never standard for proper nonempty O.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{term_residual, types_apply, weyl, CoherentVec};
use crate::{CVec, RMat, RVec};

/// Stacked real embedding (Re, Im) of a complex vector.
pub fn embed(x: &CVec) -> RVec {
    let d = x.len();
    RVec::from_fn(2 * d, |i, _| if i < d { x[i].re } else { x[i - d].im })
}

/// Inverse of [`embed`].
pub fn unembed(v: &RVec) -> CVec {
    let d = v.len() / 2;
    CVec::from_fn(d, |i, _| Complex64::new(v[i], v[i + d]))
}

/// The complex structure as a real matrix: J(x, y) = (−y, x).
pub fn jmat(d: usize) -> RMat {
    let mut j = RMat::zeros(2 * d, 2 * d);
    for i in 0..d {
        j[(i, i + d)] = -1.0;
        j[(i + d, i)] = 1.0;
    }
    j
}

fn orthonormalize(vecs: &[RVec], dim: usize) -> Vec<RVec> {
    let mut basis: Vec<RVec> = Vec::new();
    for v in vecs {
        assert_eq!(v.len(), dim, "ambient dimension mismatch");
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w -= b * c;
            }
        }
        let n = w.norm();
        if n > 1e-10 * v.norm().max(1.0) {
            basis.push(w / n);
        }
    }
    basis
}

/// Closed real subspace of H, held as a real-orthonormal basis of its
/// stacked embedding.
#[derive(Debug, Clone)]
pub struct RealSubspace {
    dim_c: usize,
    basis: Vec<RVec>,
}

impl RealSubspace {
    /// Real span of the given complex vectors (real scalars only).
    pub fn from_complex_spanners(dim_c: usize, spanners: &[CVec]) -> Self {
        let embedded: Vec<RVec> = spanners.iter().map(embed).collect();
        Self::from_real_spanners(dim_c, &embedded)
    }

    /// Real span of stacked real vectors.
    pub fn from_real_spanners(dim_c: usize, spanners: &[RVec]) -> Self {
        Self {
            dim_c,
            basis: orthonormalize(spanners, 2 * dim_c),
        }
    }

    /// The complex span of the given vectors viewed as a real subspace
    /// (adjoining i·v for every spanner).
    pub fn complex_span_as_real(dim_c: usize, spanners: &[CVec]) -> Self {
        let mut all: Vec<CVec> = spanners.to_vec();
        all.extend(
            spanners
                .iter()
                .map(|v| v * Complex64::new(0.0, 1.0)),
        );
        Self::from_complex_spanners(dim_c, &all)
    }

    /// The canonical real form H₀ ⊂ H (all-real vectors).
    pub fn real_axis(dim_c: usize) -> Self {
        let mut spanners = Vec::with_capacity(dim_c);
        for i in 0..dim_c {
            let mut v = CVec::zeros(dim_c);
            v[i] = Complex64::new(1.0, 0.0);
            spanners.push(v);
        }
        Self::from_complex_spanners(dim_c, &spanners)
    }

    pub fn full(dim_c: usize) -> Self {
        let mut spanners = Vec::new();
        for i in 0..2 * dim_c {
            let mut v = RVec::zeros(2 * dim_c);
            v[i] = 1.0;
            spanners.push(v);
        }
        Self::from_real_spanners(dim_c, &spanners)
    }

    pub fn trivial(dim_c: usize) -> Self {
        Self {
            dim_c,
            basis: Vec::new(),
        }
    }

    pub fn dim_c(&self) -> usize {
        self.dim_c
    }

    pub fn dim_r(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RVec] {
        &self.basis
    }

    /// Orthogonal projector onto the subspace (2d×2d real).
    pub fn projector(&self) -> RMat {
        let n = 2 * self.dim_c;
        let mut p = RMat::zeros(n, n);
        for b in &self.basis {
            p += b * b.transpose();
        }
        p
    }

    /// Image under a real-linear map.
    pub fn map_by(&self, m: &RMat) -> Self {
        let vecs: Vec<RVec> = self.basis.iter().map(|b| m * b).collect();
        Self::from_real_spanners(self.dim_c, &vecs)
    }

    /// Subspace spanned by the first k basis vectors.
    pub fn sub_span(&self, k: usize) -> Self {
        Self {
            dim_c: self.dim_c,
            basis: self.basis.iter().take(k).cloned().collect(),
        }
    }

    pub fn contains(&self, v: &RVec, tol: f64) -> bool {
        let p = self.projector();
        ((&p * v) - v).norm() <= tol * v.norm().max(1.0)
    }
}

/// Symmetric projector distance, the basis-independent subspace metric.
pub fn projector_distance(a: &RealSubspace, b: &RealSubspace) -> f64 {
    (a.projector() - b.projector()).norm()
}

/// Intersection of two real subspaces via the complete null space of
/// [A | −B] (from the eigendecomposition of the normal matrix, which keeps
/// every null vector even when the stacked basis is overcomplete).
pub fn intersect(a: &RealSubspace, b: &RealSubspace) -> RealSubspace {
    let n = 2 * a.dim_c;
    let (pa, qb) = (a.dim_r(), b.dim_r());
    if pa == 0 || qb == 0 {
        return RealSubspace::trivial(a.dim_c);
    }
    let mut m = RMat::zeros(n, pa + qb);
    for (k, v) in a.basis.iter().enumerate() {
        for i in 0..n {
            m[(i, k)] = v[i];
        }
    }
    for (k, v) in b.basis.iter().enumerate() {
        for i in 0..n {
            m[(i, pa + k)] = -v[i];
        }
    }
    let normal = m.transpose() * &m;
    let eig = normal.symmetric_eigen();
    // the normal matrix squares singular values, but its eigenvalues are
    // only resolved to ~ε·‖M‖², so the null threshold is absolute-ish
    let lmax = eig.eigenvalues.iter().cloned().fold(1.0_f64, f64::max);
    let mut vecs = Vec::new();
    for (i, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev < 1e-12 * lmax {
            let col = eig.eigenvectors.column(i);
            let mut x = RVec::zeros(n);
            for (k, v) in a.basis.iter().enumerate() {
                x += v * col[k];
            }
            vecs.push(x);
        }
    }
    RealSubspace::from_real_spanners(a.dim_c, &vecs)
}

/// Symplectic complement `K′ = {h : Im⟨h,k⟩ = 0 ∀k ∈ K}`, computed as the
/// real-orthogonal complement of J·K.
pub fn symplectic_complement(k: &RealSubspace) -> RealSubspace {
    let n = 2 * k.dim_c;
    let j = jmat(k.dim_c);
    if k.dim_r() == 0 {
        return RealSubspace::full(k.dim_c);
    }
    let mut m = RMat::zeros(k.dim_r(), n);
    for (r, v) in k.basis.iter().enumerate() {
        let jv = &j * v;
        for i in 0..n {
            m[(r, i)] = jv[i];
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let mut vecs = Vec::new();
    let rank_rows = svd.singular_values.len();
    for i in 0..vt.nrows() {
        let keep = i >= rank_rows || svd.singular_values[i] < 1e-10;
        if keep {
            vecs.push(vt.row(i).transpose());
        }
    }
    // the thin SVD only yields min(rows, cols) right vectors; fill the
    // remaining complement by projecting away J·K
    if vecs.len() < n - k.dim_r() {
        let pjk = {
            let jk = k.map_by(&j);
            jk.projector()
        };
        let mut cand: Vec<RVec> = Vec::new();
        for i in 0..n {
            let mut e = RVec::zeros(n);
            e[i] = 1.0;
            cand.push(&e - &pjk * &e);
        }
        vecs.extend(cand);
    }
    RealSubspace::from_real_spanners(k.dim_c, &vecs)
}

/// Standardness diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct StandardDiag {
    /// Real rank of K + iK (must be 2d).
    pub spanning_rank: usize,
    /// Real dimension of K ∩ iK (must be 0).
    pub intersection_dim: usize,
    pub ambient_real_dim: usize,
}

/// Checks `K + iK = H` and `K ∩ iK = {0}` at tolerance 1e−8.
pub fn is_standard(k: &RealSubspace) -> (bool, StandardDiag) {
    let n = 2 * k.dim_c;
    let j = jmat(k.dim_c);
    let jk = k.map_by(&j);
    let mut stacked: Vec<RVec> = k.basis.to_vec();
    stacked.extend(jk.basis.iter().cloned());
    let mut m = RMat::zeros(n, stacked.len().max(1));
    for (c, v) in stacked.iter().enumerate() {
        for i in 0..n {
            m[(i, c)] = v[i];
        }
    }
    let svd = m.svd(false, false);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-8).count();
    let inter = k.dim_r() + jk.dim_r() - rank;
    let diag = StandardDiag {
        spanning_rank: rank,
        intersection_dim: inter,
        ambient_real_dim: n,
    };
    (rank == n && inter == 0, diag)
}

/// Canonical involution and its modular polar factors.
#[derive(Debug, Clone)]
pub struct ModularData {
    /// The involution `h + ik ↦ h − ik` as a real matrix.
    pub s: RMat,
    /// Antiunitary polar factor.
    pub j: RMat,
    /// Positive factor δ = sᵀs.
    pub delta: RMat,
    pub delta_half: RMat,
    pub delta_half_inv: RMat,
    pub dim_c: usize,
}

fn sym_power(m: &RMat, p: f64) -> RMat {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut d = RMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = eig.eigenvalues[i].max(1e-300).powf(p);
    }
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Builds s on the basis [K | JK] and polar-factors it; fails with
/// `NotStandard` when K is not standard.
pub fn canonical_involution(k: &RealSubspace) -> Result<ModularData> {
    let (std_ok, diag) = is_standard(k);
    if !std_ok {
        return Err(Error::NotStandard(format!(
            "spanning rank {}/{}, intersection dim {}",
            diag.spanning_rank, diag.ambient_real_dim, diag.intersection_dim
        )));
    }
    let n = 2 * k.dim_c;
    let j = jmat(k.dim_c);
    let mut b = RMat::zeros(n, n);
    for (c, v) in k.basis.iter().enumerate() {
        let jv = &j * v;
        for i in 0..n {
            b[(i, c)] = v[i];
            b[(i, k.dim_r() + c)] = jv[i];
        }
    }
    let binv = b
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotStandard("K + iK basis is singular".into()))?;
    let mut sign = RMat::identity(n, n);
    for i in k.dim_r()..n {
        sign[(i, i)] = -1.0;
    }
    let s = &b * sign * binv;
    let delta = s.transpose() * &s;
    let delta_half = sym_power(&delta, 0.5);
    let delta_half_inv = sym_power(&delta, -0.5);
    let jpol = &s * &delta_half_inv;
    let md = ModularData {
        s,
        j: jpol,
        delta,
        delta_half,
        delta_half_inv,
        dim_c: k.dim_c,
    };
    // validate the advertised invariants before handing the data out
    let r1 = (&md.j * &md.j - RMat::identity(n, n)).norm();
    let r2 = (&md.j * &md.delta_half - &md.delta_half_inv * &md.j).norm();
    let r3 = (&md.s * &j + &j * &md.s).norm();
    if r1 > 1e-8 || r2 > 1e-8 * (1.0 + md.delta_half.norm()) || r3 > 1e-8 * (1.0 + md.s.norm()) {
        return Err(Error::Numerical(format!(
            "modular identities failed: j²−I {r1:.3e}, jδ^½−δ^−½j {r2:.3e}, sJ+Js {r3:.3e}"
        )));
    }
    Ok(md)
}

/// Residuals of the subspace-lattice identities, evaluated on a pair of
/// subspaces and a complex-linear region projector.
#[derive(Debug, Clone)]
pub struct LatticeReport {
    /// K′ is a closed real subspace: projector idempotency.
    pub complement_closed: f64,
    /// K_sub ⊆ K ⇒ K′ ⊆ K_sub′ (antitonicity).
    pub antitone: f64,
    /// K″ = K.
    pub double_complement: f64,
    /// (K + iK)′ = K′ ∩ iK′ = complex-orthogonal complement of K.
    pub sum_complement: f64,
    /// full K ⇒ K′ = {0}.
    pub dense_trivial: f64,
    /// The four projection-inclusion equivalences.
    pub projection_inclusions: f64,
    /// P(K′) = (PK)′ ∩ PH.
    pub projection_complement: f64,
}

impl LatticeReport {
    pub fn max_residual(&self) -> f64 {
        self.complement_closed
            .max(self.antitone)
            .max(self.double_complement)
            .max(self.sum_complement)
            .max(self.dense_trivial)
            .max(self.projection_inclusions)
            .max(self.projection_complement)
    }
}

/// Evaluates the lattice identities for K (with a nested subspace drawn
/// from it) and a complex-linear diagonal projector `p` (d×d, 0/1).
pub fn lattice_suite(k: &RealSubspace, p: &RMat) -> LatticeReport {
    let d = k.dim_c();
    let n = 2 * d;
    let kp = symplectic_complement(k);

    let pp = kp.projector();
    let complement_closed = (&pp * &pp - &pp).norm();

    let ksub = k.sub_span(k.dim_r().saturating_sub(1));
    let ksubp = symplectic_complement(&ksub);
    let antitone = ((RMat::identity(n, n) - ksubp.projector()) * kp.projector()).norm();

    let double_complement = projector_distance(&symplectic_complement(&kp), k);

    // (K + iK)′ three ways
    let j = jmat(d);
    let mut sum_spanners = k.basis().to_vec();
    sum_spanners.extend(k.basis().iter().map(|v| &j * v));
    let k_plus_ik = RealSubspace::from_real_spanners(d, &sum_spanners);
    let lhs = symplectic_complement(&k_plus_ik);
    let rhs = intersect(&kp, &kp.map_by(&j));
    let ortho = RealSubspace::from_real_spanners(d, &{
        // real-orthogonal complement of span(K ∪ JK)
        let pk = k_plus_ik.projector();
        let mut vecs = Vec::new();
        for i in 0..n {
            let mut e = RVec::zeros(n);
            e[i] = 1.0;
            vecs.push(&e - &pk * &e);
        }
        vecs
    });
    let sum_complement = projector_distance(&lhs, &rhs).max(projector_distance(&lhs, &ortho));

    let dense_trivial = symplectic_complement(&RealSubspace::full(d))
        .projector()
        .norm();

    // compatible K for property (6): P K ⊂ K by construction
    let p_real = {
        let mut m = RMat::zeros(n, n);
        for i in 0..d {
            for jj in 0..d {
                m[(i, jj)] = p[(i, jj)];
                m[(i + d, jj + d)] = p[(i, jj)];
            }
        }
        m
    };
    let q_real = RMat::identity(n, n) - &p_real;
    // a proper compatible subspace: P-images of one half of the basis,
    // Q-images of the other, so that P·K_c ⊆ K_c without filling H
    let half = k.dim_r() / 2;
    let mut compat_spanners: Vec<RVec> = k
        .basis()
        .iter()
        .take(half)
        .map(|v| &p_real * v)
        .collect();
    compat_spanners.extend(k.basis().iter().skip(half).map(|v| &q_real * v));
    let kc = RealSubspace::from_real_spanners(d, &compat_spanners);
    let kcp = symplectic_complement(&kc);
    let inclusion = |sub: &RealSubspace, m: &RMat| -> f64 {
        let proj = sub.projector();
        let mapped = m * &proj;
        ((RMat::identity(n, n) - &proj) * mapped).norm()
    };
    let projection_inclusions = inclusion(&kc, &p_real)
        .max(inclusion(&kc, &q_real))
        .max(inclusion(&kcp, &p_real))
        .max(inclusion(&kcp, &q_real));

    let pk_prime = symplectic_complement(&kc.map_by(&p_real));
    let ph = {
        let mut vecs = Vec::new();
        for i in 0..n {
            let mut e = RVec::zeros(n);
            e[i] = 1.0;
            vecs.push(&p_real * &e);
        }
        RealSubspace::from_real_spanners(d, &vecs)
    };
    let rhs6 = intersect(&pk_prime, &ph);
    let lhs6 = kcp.map_by(&p_real);
    let projection_complement = projector_distance(&lhs6, &rhs6);

    LatticeReport {
        complement_closed,
        antitone,
        double_complement,
        sum_complement,
        dense_trivial,
        projection_inclusions,
        projection_complement,
    }
}

/// Coherent-domain check of the second-quantized involution: for h ∈ K,
/// `Γ(s)(W(h)Ω)` must equal `W(−h)Ω`, through
/// `W(h)Ω = e^{−¼‖h‖²}·Exp(ih/√2)` and `s(ih/√2) = −ih/√2`.
pub fn second_quantized_s_check(k: &RealSubspace, h: &CVec) -> Result<f64> {
    let md = canonical_involution(k)?;
    let hr = embed(h);
    if !k.contains(&hr, 1e-9) {
        return Err(Error::Numerical("test vector not in K".into()));
    }
    let d = k.dim_c();
    let xi = h * Complex64::new(0.0, 1.0 / 2.0_f64.sqrt());
    let s_xi = unembed(&(&md.s * embed(&xi)));
    let w_h_omega = types_apply(&weyl(h), &CoherentVec::vacuum(d))?;
    let coeff = w_h_omega.terms()[0].0;
    // Γ(s) is antilinear: λ·Exp(ξ) ↦ conj(λ)·Exp(sξ)
    let predicted = CoherentVec::new(vec![(coeff.conj(), s_xi)])?;
    let direct = types_apply(&weyl(&(-h)), &CoherentVec::vacuum(d))?;
    term_residual(&predicted, &direct)
}
