//! Exact Fock-space engine on the span of exponential vectors.
//!
//! Vectors are finite combinations `Σ λᵢ·Exp(xᵢ)` with
//! `⟨Exp x, Exp y⟩ = e^{⟨x,y⟩}`; type (S) operators act termwise in closed
//! form, so every identity here is exact up to floating point.
//!
//! Inner products are linear in the first argument and antilinear in the
//! second, everywhere. Under this convention the type (S) composition law
//! carries the phase `exp(i·Im⟨b, Ab′⟩)` and the Weyl relation realizes the
//! phase `exp(+i/2·Im⟨h,k⟩)`; the composition law is the ground truth and
//! the Weyl sign is derived from it (see `weyl_relation_sign`).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Distribution;

use crate::cocycle::{beta, v_matrix};
use crate::error::{Error, Result};
use crate::lattice::GaugeJet;
use crate::{CMat, CVec};

/// Default cap on exponential-vector arguments, keeping Gram entries within
/// double-precision range (`e^{36}`).
pub const DEFAULT_NORM_CAP: f64 = 6.0;

const EXP_BUDGET: f64 = 700.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `⟨x, y⟩ = Σ xᵢ·conj(yᵢ)`: linear in the first argument.
pub fn cinner(x: &CVec, y: &CVec) -> Complex64 {
    y.dotc(x)
}

/// `⟨Exp x, Exp y⟩ = e^{⟨x,y⟩}`.
pub fn exp_inner(x: &CVec, y: &CVec) -> Result<Complex64> {
    let ip = cinner(x, y);
    if ip.re > EXP_BUDGET {
        return Err(Error::Overflow { re: ip.re });
    }
    Ok(ip.exp())
}

/// Finite complex-linear combination of exponential vectors.
#[derive(Debug, Clone)]
pub struct CoherentVec {
    terms: Vec<(Complex64, CVec)>,
    cap: f64,
}

impl CoherentVec {
    /// Builds a combination under the default norm cap.
    pub fn new(terms: Vec<(Complex64, CVec)>) -> Result<Self> {
        Self::with_cap(terms, DEFAULT_NORM_CAP)
    }

    /// Builds a combination under an explicit norm cap.
    pub fn with_cap(terms: Vec<(Complex64, CVec)>, cap: f64) -> Result<Self> {
        for (_, x) in &terms {
            let n = x.norm();
            if n > cap {
                return Err(Error::Overflow { re: n * n });
            }
        }
        Ok(Self { terms, cap })
    }

    /// The single exponential vector Exp(x).
    pub fn exp_vector(x: CVec) -> Result<Self> {
        Self::new(vec![(c(1.0, 0.0), x)])
    }

    /// The Fock vacuum Exp(0).
    pub fn vacuum(dim: usize) -> Self {
        Self {
            terms: vec![(c(1.0, 0.0), CVec::zeros(dim))],
            cap: DEFAULT_NORM_CAP,
        }
    }

    pub fn terms(&self) -> &[(Complex64, CVec)] {
        &self.terms
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    pub fn dim(&self) -> usize {
        self.terms.first().map(|(_, x)| x.len()).unwrap_or(0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            terms: self.terms.iter().map(|(l, x)| (l * s, x.clone())).collect(),
            cap: self.cap,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self {
            terms,
            cap: self.cap.max(other.cap),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c(-1.0, 0.0)))
    }
}

/// Sesquilinear pairing `⟨u, v⟩ = Σᵢⱼ λᵢ·conj(μⱼ)·e^{⟨xᵢ, yⱼ⟩}`.
pub fn coh_inner(u: &CoherentVec, v: &CoherentVec) -> Result<Complex64> {
    let mut acc = c(0.0, 0.0);
    for (l, x) in u.terms() {
        for (m, y) in v.terms() {
            acc += l * m.conj() * exp_inner(x, y)?;
        }
    }
    Ok(acc)
}

/// Norm on the coherent span.
pub fn coh_norm(u: &CoherentVec) -> Result<f64> {
    Ok(coh_inner(u, u)?.re.max(0.0).sqrt())
}

/// Distance between two combinations via the pairing.
///
/// The Gram formula cancels catastrophically near zero (noise floor
/// ~√(scale·ε)); for near-equal single-term vectors use [`term_residual`].
pub fn coh_distance(u: &CoherentVec, v: &CoherentVec) -> Result<f64> {
    coh_norm(&u.sub(v))
}

/// Residual between two single-term coherent vectors compared term by
/// term: `|λ − λ′| + ‖x − x′‖`. Exponential vectors are linearly
/// independent, so this vanishes iff the vectors are equal, and it carries
/// no Gram cancellation.
pub fn term_residual(u: &CoherentVec, v: &CoherentVec) -> Result<f64> {
    match (u.terms(), v.terms()) {
        ([(lu, xu)], [(lv, xv)]) => Ok((lu - lv).norm() + (xu - xv).norm()),
        _ => Err(Error::Numerical(
            "term_residual requires single-term vectors".into(),
        )),
    }
}

/// Operator of type (S): the triple (A, b, c) with A unitary, b ∈ H, |c| = 1,
/// acting by `U_{A,b,c} Exp x = c·e^{−½‖b‖² − ⟨Ax,b⟩}·Exp(Ax + b)`.
#[derive(Debug, Clone)]
pub struct TypeS {
    a: CMat,
    b: CVec,
    c: Complex64,
}

impl TypeS {
    pub fn new(a: CMat, b: CVec, c0: Complex64) -> Result<Self> {
        let d = a.nrows();
        if a.ncols() != d || b.len() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: b.len(),
            });
        }
        let uerr = (a.adjoint() * &a - CMat::identity(d, d)).norm();
        if uerr > 1e-10 {
            return Err(Error::Numerical(format!(
                "A not unitary: residual {uerr:.3e}"
            )));
        }
        if (c0.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Numerical(format!(
                "|c| = {} differs from 1",
                c0.norm()
            )));
        }
        Ok(Self { a, b, c: c0 })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            a: CMat::identity(dim, dim),
            b: CVec::zeros(dim),
            c: c(1.0, 0.0),
        }
    }

    /// Shift operator U_{I,b,1}.
    pub fn shift(b: CVec) -> Self {
        let d = b.len();
        Self {
            a: CMat::identity(d, d),
            b,
            c: c(1.0, 0.0),
        }
    }

    pub(crate) fn from_parts_unchecked(a: CMat, b: CVec, c0: Complex64) -> Self {
        Self { a, b, c: c0 }
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CVec {
        &self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `‖A − A′‖_F + ‖b − b′‖ + |c − c′|`, the triple distance.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.a - &other.a).norm() + (&self.b - &other.b).norm() + (self.c - other.c).norm()
    }
}

/// Termwise closed-form action of a type (S) operator.
pub fn types_apply(u: &TypeS, v: &CoherentVec) -> Result<CoherentVec> {
    if v.dim() != u.dim() && !v.terms().is_empty() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let half_b2 = 0.5 * cinner(&u.b, &u.b).re;
    let mut terms = Vec::with_capacity(v.terms().len());
    for (l, x) in v.terms() {
        let ax = &u.a * x;
        let expo = -c(half_b2, 0.0) - cinner(&ax, &u.b);
        if expo.re > EXP_BUDGET {
            return Err(Error::Overflow { re: expo.re });
        }
        terms.push((l * u.c * expo.exp(), ax + &u.b));
    }
    CoherentVec::with_cap(terms, v.cap())
}

/// Composition law: `U_{A,b,c}·U_{A′,b′,c′}
///   = exp(i·Im⟨b, Ab′⟩)·U_{AA′, b+Ab′, cc′}`.
pub fn types_compose(u: &TypeS, u2: &TypeS) -> Result<TypeS> {
    if u.dim() != u2.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: u2.dim(),
        });
    }
    let ab2 = &u.a * &u2.b;
    let twist = cinner(&u.b, &ab2).im;
    let phase = Complex64::from_polar(1.0, twist);
    Ok(TypeS {
        a: &u.a * &u2.a,
        b: &u.b + ab2,
        c: u.c * u2.c * phase,
    })
}

/// Inverse triple: `U_{A,b,c}⁻¹ = U_{A⁻¹, −A⁻¹b, conj(c)}`.
pub fn types_inverse(u: &TypeS) -> TypeS {
    let ai = u.a.adjoint();
    let b = -(&ai * &u.b);
    TypeS {
        a: ai,
        b,
        c: u.c.conj(),
    }
}

/// The energy representation `U(ψ) = U_{V(ψ), β(ψ), 1}`.
///
/// V and β are real, so composing energy representatives always yields
/// phase exactly 1: `Im⟨β(ψ₁), V(ψ₁)β(ψ₂)⟩ = 0`.
pub fn energy_rep(psi: &GaugeJet) -> TypeS {
    let vm = v_matrix(psi);
    let d = vm.nrows();
    let a = CMat::from_fn(d, d, |i, j| c(vm[(i, j)], 0.0));
    let b = beta(psi).hvec();
    TypeS { a, b, c: c(1.0, 0.0) }
}

/// Weyl operator `W(h) = U_{I, ih/√2, 1}`, so that
/// `W(h)Exp(0) = e^{−¼‖h‖²}·Exp(ih/√2)`.
pub fn weyl(h: &CVec) -> TypeS {
    let b = h * c(0.0, 1.0 / 2.0_f64.sqrt());
    TypeS::shift(b)
}

/// Sign of the Weyl-relation phase realized by the composition law:
/// `W(h)W(k) = exp(s·(i/2)·Im⟨h,k⟩)·W(h+k)` with s = ±1.
pub fn weyl_relation_sign(h: &CVec, k: &CVec) -> Result<f64> {
    let lhs = types_compose(&weyl(h), &weyl(k))?;
    let im = cinner(h, k).im;
    if im.abs() < 1e-12 {
        return Err(Error::Numerical(
            "Im<h,k> too small to determine the sign".into(),
        ));
    }
    let plus = Complex64::from_polar(1.0, 0.5 * im);
    let minus = Complex64::from_polar(1.0, -0.5 * im);
    if (lhs.c - plus).norm() <= (lhs.c - minus).norm() {
        Ok(1.0)
    } else {
        Ok(-1.0)
    }
}

/// `⟨Exp x, (Σ coeffs·U) Exp y⟩` in closed form.
pub fn matrix_element(ops: &[(Complex64, TypeS)], x: &CVec, y: &CVec) -> Result<Complex64> {
    let mut acc = c(0.0, 0.0);
    for (coeff, u) in ops {
        let ay = &u.a * y;
        let expo = -c(0.5 * cinner(&u.b, &u.b).re, 0.0) - cinner(&ay, &u.b);
        if expo.re > EXP_BUDGET {
            return Err(Error::Overflow { re: expo.re });
        }
        let lam = coeff * u.c * expo.exp();
        // ⟨Exp x, λ·Exp(Ay + b)⟩ = conj(λ)·e^{⟨x, Ay+b⟩}
        acc += lam.conj() * exp_inner(x, &(ay + &u.b))?;
    }
    Ok(acc)
}

/// Max matrix-element residual of L − R over a grid of exponential-vector
/// pairs; zero iff the operators agree on the coherent span.
pub fn op_equal(
    l: &[(Complex64, TypeS)],
    r: &[(Complex64, TypeS)],
    grid: &[(CVec, CVec)],
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::Numerical("operator-equality grid is empty".into()));
    }
    let mut worst = 0.0_f64;
    for (x, y) in grid {
        let me = (matrix_element(l, x, y)? - matrix_element(r, x, y)?).norm();
        worst = worst.max(me);
    }
    Ok(worst)
}

/// Standard grid: (0,0), (0,b), (b,0) for every b appearing in the
/// operands, plus seeded random pairs.
pub fn default_grid(
    dim: usize,
    operands: &[&TypeS],
    random_pairs: usize,
    seed: u64,
) -> Vec<(CVec, CVec)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let zero = CVec::zeros(dim);
    let mut grid = vec![(zero.clone(), zero.clone())];
    for u in operands {
        grid.push((zero.clone(), u.b.clone()));
        grid.push((u.b.clone(), zero.clone()));
    }
    for _ in 0..random_pairs {
        grid.push((
            random_hvec(dim, 1.0, &mut rng),
            random_hvec(dim, 1.0, &mut rng),
        ));
    }
    grid
}

/// Numerical rank of the Gram matrix of `{Exp(xᵢ)}` (relative eigenvalue
/// threshold).
pub fn gram_rank(vectors: &[CVec], tol: f64) -> Result<usize> {
    let n = vectors.len();
    if n == 0 {
        return Ok(0);
    }
    let mut g = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = exp_inner(&vectors[i], &vectors[j])?;
        }
    }
    let eig = g.symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > tol * max.max(1e-300))
        .count())
}

/// Seeded complex Gaussian vector with expected norm ≈ scale.
pub fn random_hvec<R: Rng>(dim: usize, scale: f64, rng: &mut R) -> CVec {
    let normal = rand_distr::StandardNormal;
    let raw = CVec::from_fn(dim, |_, _| {
        let re: f64 = normal.sample(rng);
        let im: f64 = normal.sample(rng);
        c(re, im)
    });
    let n = raw.norm();
    if n == 0.0 {
        raw
    } else {
        raw * c(scale / n, 0.0)
    }
}

/// Seeded Haar-distributed unitary via QR of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMat {
    let normal = rand_distr::StandardNormal;
    let gin = CMat::from_fn(dim, dim, |_, _| {
        let re: f64 = normal.sample(rng);
        let im: f64 = normal.sample(rng);
        c(re, im)
    });
    let qr = gin.qr();
    let r = qr.r();
    let mut q = qr.q();
    // fix the phase convention so the distribution is Haar
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Seeded random type (S) operator with ‖b‖ ≈ b_scale.
pub fn random_types<R: Rng>(dim: usize, b_scale: f64, rng: &mut R) -> TypeS {
    let a = haar_unitary(dim, rng);
    let b = random_hvec(dim, b_scale, rng);
    let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    TypeS {
        a,
        b,
        c: Complex64::from_polar(1.0, phase),
    }
}
