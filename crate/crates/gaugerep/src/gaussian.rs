//! Finite-dimensional Gaussian realization of the Fock space on L²(E′, μ).
//!
//! E = R^d carries a positive-definite form Q; μ is the centered Gaussian
//! on E′ ≅ R^d whose characteristic function is `exp(−½Q(F,F))`. The
//! isomorphism θ maps `Exp x ↦ e^{½x^TQx}·e^{i⟨·,x⟩}` (complex-bilinear
//! square in the coefficient), and every μ-integral of the functional
//! class has a closed Gaussian form — Monte Carlo is a cross-check layer,
//! never the ground truth.
//!
//! The transported representation acts on raw functionals by
//! `Φ ↦ e^{i⟨·, β(ψ)⟩}·Φ(V(ψ)⁻¹·)`, i.e. termwise `x ↦ V(ψ)x + β(ψ)` with
//! the coefficient unchanged.

use nalgebra::Cholesky;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::cocycle::{beta, v_matrix};
use crate::error::{Error, Result};
use crate::fock::CoherentVec;
use crate::lattice::GaugeJet;
use crate::{CMat, CVec, RMat, RVec};

const EXP_BUDGET: f64 = 700.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real space E with a positive-definite covariance form Q.
pub struct GaussianSpace {
    q: RMat,
    qc: CMat,
    chol: Cholesky<f64, nalgebra::Dyn>,
}

impl GaussianSpace {
    /// Validates symmetry and positive definiteness (min eigenvalue > 1e−10).
    pub fn new(q: RMat) -> Result<Self> {
        let d = q.nrows();
        if q.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: q.ncols(),
            });
        }
        if (&q - q.transpose()).norm() > 1e-12 * (1.0 + q.norm()) {
            return Err(Error::Numerical("covariance not symmetric".into()));
        }
        let eig = q.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min <= 1e-10 {
            return Err(Error::Numerical(format!(
                "covariance not positive definite: min eigenvalue {min:.3e}"
            )));
        }
        let chol = Cholesky::new(q.clone())
            .ok_or_else(|| Error::Numerical("cholesky factorization failed".into()))?;
        let qc = CMat::from_fn(d, d, |i, j| c(q[(i, j)], 0.0));
        Ok(Self { q, qc, chol })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(RMat::identity(d, d)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn covariance(&self) -> &RMat {
        &self.q
    }

    /// Characteristic function of μ: `∫ e^{i⟨χ,F⟩} dμ = e^{−½Q(F,F)}`.
    pub fn characteristic(&self, f: &RVec) -> f64 {
        (-0.5 * (self.q.clone() * f).dot(f)).exp()
    }

    /// Complex-bilinear square `x^T Q x`.
    pub fn qform(&self, x: &CVec) -> Complex64 {
        (&self.qc * x).dot(x)
    }

    /// One Gaussian sample χ ~ N(0, Q).
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> RVec {
        let normal = rand_distr::StandardNormal;
        let z = RVec::from_fn(self.dim(), |_, _| normal.sample(rng));
        self.chol.l() * z
    }
}

/// Finite combination `Σ aᵢ·e^{i⟨·, xᵢ⟩}` of exponential functionals on E′.
#[derive(Debug, Clone)]
pub struct ThetaFunctional {
    terms: Vec<(Complex64, CVec)>,
}

impl ThetaFunctional {
    pub fn new(terms: Vec<(Complex64, CVec)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(Complex64, CVec)] {
        &self.terms
    }

    /// Pointwise evaluation at χ ∈ E′.
    pub fn eval(&self, chi: &RVec) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for (a, x) in &self.terms {
            let chix = CVec::from_fn(x.len(), |i, _| c(chi[i], 0.0)).dot(x);
            acc += a * (c(0.0, 1.0) * chix).exp();
        }
        acc
    }
}

/// θ on the coherent span: `Exp x ↦ e^{½x^TQx}·e^{i⟨·,x⟩}` termwise.
pub fn theta(space: &GaussianSpace, v: &CoherentVec) -> Result<ThetaFunctional> {
    let mut terms = Vec::with_capacity(v.terms().len());
    for (l, x) in v.terms() {
        let e = 0.5 * space.qform(x);
        if e.re > EXP_BUDGET {
            return Err(Error::Overflow { re: e.re });
        }
        terms.push((l * e.exp(), x.clone()));
    }
    Ok(ThetaFunctional::new(terms))
}

/// Closed-form L²(μ) pairing `⟨Φ, Ψ⟩ = ∫ Φ·conj(Ψ) dμ`, linear in the
/// first argument: one Gaussian integral per term pair.
pub fn l2_inner(
    space: &GaussianSpace,
    phi: &ThetaFunctional,
    psi: &ThetaFunctional,
) -> Result<Complex64> {
    let mut acc = c(0.0, 0.0);
    for (a, x) in phi.terms() {
        for (b, y) in psi.terms() {
            let w = x - y.map(|z| z.conj());
            let e = -0.5 * space.qform(&w);
            if e.re > EXP_BUDGET {
                return Err(Error::Overflow { re: e.re });
            }
            acc += a * b.conj() * e.exp();
        }
    }
    Ok(acc)
}

/// `∫ conj(θExp x)·(θExp y) dμ` in closed Gaussian form; equals the Fock
/// pairing `e^{⟨y,x⟩_Q}` with `⟨u,v⟩_Q = u^T·Q·conj(v)`.
pub fn theta_pairing(space: &GaussianSpace, x: &CVec, y: &CVec) -> Result<Complex64> {
    let tx = theta(space, &CoherentVec::exp_vector(x.clone())?)?;
    let ty = theta(space, &CoherentVec::exp_vector(y.clone())?)?;
    l2_inner(space, &ty, &tx)
}

/// The Fock-side value `e^{⟨y,x⟩_Q}` that `theta_pairing` must reproduce.
pub fn fock_pairing(space: &GaussianSpace, x: &CVec, y: &CVec) -> Result<Complex64> {
    let xb = x.map(|z| z.conj());
    let ip = (&space.qc * &xb).dot(y);
    if ip.re > EXP_BUDGET {
        return Err(Error::Overflow { re: ip.re });
    }
    Ok(ip.exp())
}

/// The transported representation on raw functionals:
/// `[T(ψ)Φ](χ) = e^{i⟨χ, β(ψ)⟩}·Φ(V(ψ)⁻¹χ)`, i.e. termwise
/// `(a, x) ↦ (a, V(ψ)x + β(ψ))`.
pub fn transformed_apply(psi: &GaugeJet, phi: &ThetaFunctional) -> ThetaFunctional {
    let vm = v_matrix(psi);
    let b = beta(psi).coords();
    transformed_apply_matrix(&vm, &b, phi)
}

/// Same action from an explicit orthogonal matrix and real cocycle value.
pub fn transformed_apply_matrix(vm: &RMat, b: &RVec, phi: &ThetaFunctional) -> ThetaFunctional {
    let d = vm.nrows();
    let vc = CMat::from_fn(d, d, |i, j| c(vm[(i, j)], 0.0));
    let bc = CVec::from_fn(d, |i, _| c(b[i], 0.0));
    ThetaFunctional::new(
        phi.terms()
            .iter()
            .map(|(a, x)| (*a, &vc * x + &bc))
            .collect(),
    )
}

/// Seeded Monte Carlo mean of a functional with standard errors of the
/// real and imaginary parts.
pub struct McEstimate {
    pub mean: Complex64,
    pub se_re: f64,
    pub se_im: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Whether a closed-form value lies within k standard errors
    /// componentwise (with a small absolute slack for exact constants).
    pub fn within(&self, closed: Complex64, k: f64) -> bool {
        let slack = 1e-12;
        (self.mean.re - closed.re).abs() <= k * self.se_re + slack
            && (self.mean.im - closed.im).abs() <= k * self.se_im + slack
    }
}

/// Estimates `∫ Φ dμ` by averaging over seeded Gaussian samples.
pub fn mc_mean(space: &GaussianSpace, phi: &ThetaFunctional, samples: usize, seed: u64) -> McEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = c(0.0, 0.0);
    let mut sum_re2 = 0.0;
    let mut sum_im2 = 0.0;
    for _ in 0..samples {
        let chi = space.sample(&mut rng);
        let v = phi.eval(&chi);
        sum += v;
        sum_re2 += v.re * v.re;
        sum_im2 += v.im * v.im;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var_re = (sum_re2 / n - mean.re * mean.re).max(0.0);
    let var_im = (sum_im2 / n - mean.im * mean.im).max(0.0);
    McEstimate {
        mean,
        se_re: (var_re / n).sqrt(),
        se_im: (var_im / n).sqrt(),
        samples,
    }
}

/// MC estimate of `∫ conj(Φ)·Ψ dμ` (for pairing cross-checks).
pub fn mc_pairing(
    space: &GaussianSpace,
    phi: &ThetaFunctional,
    psi: &ThetaFunctional,
    samples: usize,
    seed: u64,
) -> McEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = c(0.0, 0.0);
    let mut sum_re2 = 0.0;
    let mut sum_im2 = 0.0;
    for _ in 0..samples {
        let chi = space.sample(&mut rng);
        let v = phi.eval(&chi).conj() * psi.eval(&chi);
        sum += v;
        sum_re2 += v.re * v.re;
        sum_im2 += v.im * v.im;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var_re = (sum_re2 / n - mean.re * mean.re).max(0.0);
    let var_im = (sum_im2 / n - mean.im * mean.im).max(0.0);
    McEstimate {
        mean,
        se_re: (var_re / n).sqrt(),
        se_im: (var_im / n).sqrt(),
        samples,
    }
}
