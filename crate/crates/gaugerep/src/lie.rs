//! Compact semisimple Lie group/algebra numerics for su(2) and su(3).
//!
//! Conventions:
//! - algebra elements are anti-Hermitian traceless complex matrices,
//! - the inner product on the algebra is the minus of the Killing form,
//!   `⟨X, Y⟩ = −B(X, Y) = −Tr(ad X · ad Y)`, positive definite here,
//! - `dexp_right(φ, δ)` is the right logarithmic derivative of the
//!   exponential map, `f(ad_φ) δ` with `f(z) = (e^z − 1)/z`, evaluated by
//!   eigendecomposition of `ad_φ` (series below |z| < 1e−4).

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{CMat, CVec, RMat, RVec};

const INVARIANT_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Anti-Hermitian traceless complex matrix: an element of su(n), n ∈ {2, 3}.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    mat: CMat,
}

impl AlgebraElement {
    /// Validates anti-Hermitianness and tracelessness to 1e−12.
    pub fn new(mat: CMat) -> Result<Self> {
        let n = mat.nrows();
        if n != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: n,
                right: mat.ncols(),
            });
        }
        let herm = (&mat + mat.adjoint()).norm();
        if herm > INVARIANT_TOL {
            return Err(Error::Numerical(format!(
                "matrix not anti-Hermitian: residual {herm:.3e}"
            )));
        }
        let tr = mat.trace();
        if tr.norm() > INVARIANT_TOL {
            return Err(Error::Numerical(format!(
                "matrix not traceless: |tr| = {:.3e}",
                tr.norm()
            )));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            mat: CMat::zeros(n, n),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mat: &self.mat * c(s, 0.0),
        }
    }

    /// Commutator [self, other].
    pub fn bracket(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
        }
    }

    /// Norm induced by the Killing inner product.
    pub fn norm(&self) -> f64 {
        killing_inner(self, self).max(0.0).sqrt()
    }

    /// Coordinates in the orthonormal su(n) basis.
    pub fn coords(&self) -> RVec {
        let basis = su_basis(self.dim()).expect("basis for validated element");
        RVec::from_fn(basis.dim, |i, _| killing_inner(self, &basis.elems[i]))
    }

    /// Element with the given coordinates in the orthonormal su(n) basis.
    pub fn from_coords(n: usize, coords: &RVec) -> Result<Self> {
        let basis = su_basis(n)?;
        if coords.len() != basis.dim {
            return Err(Error::DimensionMismatch {
                left: coords.len(),
                right: basis.dim,
            });
        }
        let mut mat = CMat::zeros(n, n);
        for (i, b) in basis.elems.iter().enumerate() {
            mat += b.matrix() * c(coords[i], 0.0);
        }
        Ok(Self { mat })
    }

    /// Seeded random element with coordinates ~ scale·N(0,1).
    pub fn random<R: rand::Rng>(n: usize, scale: f64, rng: &mut R) -> Result<Self> {
        use rand_distr::Distribution;
        let basis = su_basis(n)?;
        let coords = RVec::from_fn(basis.dim, |_, _| {
            let g: f64 = rand_distr::StandardNormal.sample(rng);
            scale * g
        });
        Self::from_coords(n, &coords)
    }
}

/// Special unitary matrix: an element of SU(n).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    mat: CMat,
}

impl GroupElement {
    /// Validates unitarity and |det − 1| ≤ 1e−12.
    pub fn new(mat: CMat) -> Result<Self> {
        let n = mat.nrows();
        let uerr = (mat.adjoint() * &mat - CMat::identity(n, n)).norm();
        if uerr > INVARIANT_TOL {
            return Err(Error::Numerical(format!(
                "matrix not unitary: residual {uerr:.3e}"
            )));
        }
        let det = mat.determinant();
        if (det - c(1.0, 0.0)).norm() > INVARIANT_TOL {
            return Err(Error::Numerical(format!(
                "determinant {det} differs from 1"
            )));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: CMat::identity(n, n),
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        self.mat == CMat::identity(n, n)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat * &other.mat,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    /// Operator-norm distance to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        let n = self.dim();
        let d = &self.mat - CMat::identity(n, n);
        d.singular_values().max()
    }
}

/// Orthonormal basis of su(n) with respect to the Killing inner product.
pub struct SuBasis {
    pub n: usize,
    /// Real dimension n² − 1.
    pub dim: usize,
    pub elems: Vec<AlgebraElement>,
    /// Indices of the diagonal (Cartan) basis elements.
    pub cartan_idx: Vec<usize>,
}

fn raw_su2() -> Vec<CMat> {
    let i = c(0.0, 1.0);
    vec![
        // i σ1, i σ2, i σ3
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), i, i, c(0.0, 0.0)]),
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]),
        CMat::from_row_slice(2, 2, &[i, c(0.0, 0.0), c(0.0, 0.0), -i]),
    ]
}

fn raw_su3() -> Vec<CMat> {
    let i = c(0.0, 1.0);
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let s3 = 3.0_f64.sqrt();
    vec![
        // i λ_a for the eight Gell-Mann matrices
        CMat::from_row_slice(3, 3, &[o, i, o, i, o, o, o, o, o]),
        CMat::from_row_slice(3, 3, &[o, l, o, -l, o, o, o, o, o]),
        CMat::from_row_slice(3, 3, &[i, o, o, o, -i, o, o, o, o]),
        CMat::from_row_slice(3, 3, &[o, o, i, o, o, o, i, o, o]),
        CMat::from_row_slice(3, 3, &[o, o, l, o, o, o, -l, o, o]),
        CMat::from_row_slice(3, 3, &[o, o, o, o, o, i, o, i, o]),
        CMat::from_row_slice(3, 3, &[o, o, o, o, o, l, o, -l, o]),
        CMat::from_row_slice(
            3,
            3,
            &[
                c(0.0, 1.0 / s3),
                o,
                o,
                o,
                c(0.0, 1.0 / s3),
                o,
                o,
                o,
                c(0.0, -2.0 / s3),
            ],
        ),
    ]
}

static SU2_BASIS: OnceLock<SuBasis> = OnceLock::new();
static SU3_BASIS: OnceLock<SuBasis> = OnceLock::new();

/// The fixed orthonormal basis of su(n), n ∈ {2, 3}.
pub fn su_basis(n: usize) -> Result<&'static SuBasis> {
    let build = |raw: Vec<CMat>, cartan_idx: Vec<usize>| {
        let elems: Vec<AlgebraElement> = raw
            .into_iter()
            .map(|m| {
                let e = AlgebraElement::from_matrix_unchecked(m);
                let nrm = killing_inner(&e, &e).sqrt();
                e.scale(1.0 / nrm)
            })
            .collect();
        SuBasis {
            n,
            dim: elems.len(),
            elems,
            cartan_idx,
        }
    };
    match n {
        2 => Ok(SU2_BASIS.get_or_init(|| build(raw_su2(), vec![2]))),
        3 => Ok(SU3_BASIS.get_or_init(|| build(raw_su3(), vec![2, 7]))),
        _ => Err(Error::Unsupported(format!("su({n}) not supported"))),
    }
}

/// Minus the Killing form: `−B(X, Y) = −2n·Tr(XY)` on su(n).
pub fn killing_inner(x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    let n = x.dim() as f64;
    -2.0 * n * (x.matrix() * y.matrix()).trace().re
}

/// Matrix of `ad_X = [X, ·]` in the orthonormal su(n) basis (real, antisymmetric).
pub fn ad_matrix(x: &AlgebraElement) -> RMat {
    let basis = su_basis(x.dim()).expect("validated element");
    let d = basis.dim;
    let mut m = RMat::zeros(d, d);
    for j in 0..d {
        let col = x.bracket(&basis.elems[j]);
        for i in 0..d {
            m[(i, j)] = killing_inner(&col, &basis.elems[i]);
        }
    }
    m
}

/// Matrix of `Ad_g = g · g⁻¹` in the orthonormal su(n) basis (real, orthogonal).
pub fn adjoint_matrix(g: &GroupElement) -> RMat {
    let basis = su_basis(g.dim()).expect("validated element");
    let d = basis.dim;
    let mut m = RMat::zeros(d, d);
    for j in 0..d {
        let col = adjoint_action(g, &basis.elems[j]);
        for i in 0..d {
            m[(i, j)] = killing_inner(&col, &basis.elems[i]);
        }
    }
    m
}

/// `Ad(g, X) = g X g⁻¹`.
pub fn adjoint_action(g: &GroupElement, x: &AlgebraElement) -> AlgebraElement {
    let y = g.matrix() * x.matrix() * g.matrix().adjoint();
    // project back onto the anti-Hermitian part; exact on clean inputs
    let skew = (&y - y.adjoint()) * c(0.5, 0.0);
    AlgebraElement::from_matrix_unchecked(skew)
}

/// Matrix exponential su(n) → SU(n), via Hermitian eigendecomposition of −iX.
pub fn alg_exp(x: &AlgebraElement) -> GroupElement {
    if x.is_zero() {
        return GroupElement::identity(x.dim());
    }
    let h = x.matrix() * c(0.0, -1.0);
    let se = h.symmetric_eigen();
    let n = x.dim();
    let mut d = CMat::zeros(n, n);
    for k in 0..n {
        d[(k, k)] = (c(0.0, 1.0) * se.eigenvalues[k]).exp();
    }
    let g = &se.eigenvectors * d * se.eigenvectors.adjoint();
    GroupElement::from_matrix_unchecked(g)
}

/// Eigendecomposition of a normal (here unitary) matrix via a Hermitian
/// combination of its Hermitian and skew-Hermitian parts.
fn unitary_eigen(m: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    let n = m.nrows();
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    let skew = (m - m.adjoint()) * c(0.0, -0.5);
    // mixing constants: retried when eigenvalue collisions spoil a split
    const MIX: [f64; 4] = [0.73908513321516067, 0.41421356237309515, 1.2020569031595943, 0.0];
    let scale = m.norm().max(1.0);
    for &t in MIX.iter() {
        let h = &herm + &skew * c(t, 0.0);
        let se = h.symmetric_eigen();
        let u = se.eigenvectors;
        let mut vals = Vec::with_capacity(n);
        for j in 0..n {
            let col = u.column(j);
            let mv = m * col;
            vals.push(col.dotc(&mv));
        }
        let mut resid = 0.0_f64;
        for j in 0..n {
            let col = u.column(j);
            let r = (m * col - col * vals[j]).norm();
            resid = resid.max(r);
        }
        if resid <= 1e-10 * scale {
            return Ok((vals, u));
        }
    }
    Err(Error::Numerical(
        "unitary eigendecomposition did not converge".into(),
    ))
}

/// Principal matrix logarithm SU(n) → su(n).
///
/// Requires all eigenvalue arguments in (−π, π); arguments within 1e−6 of
/// ±π (or a branch whose arguments do not sum to zero) report `CutLocus`.
pub fn alg_log(g: &GroupElement) -> Result<AlgebraElement> {
    let n = g.dim();
    if g.is_identity() {
        return Ok(AlgebraElement::zero(n));
    }
    let (vals, u) = unitary_eigen(g.matrix())?;
    let args: Vec<f64> = vals.iter().map(|v| v.arg()).collect();
    for &a in &args {
        if std::f64::consts::PI - a.abs() < 1e-6 {
            return Err(Error::CutLocus { arg: a });
        }
    }
    let total: f64 = args.iter().sum();
    if total.abs() > 1e-6 {
        // principal arguments do not give a traceless logarithm
        return Err(Error::CutLocus { arg: total });
    }
    let mut d = CMat::zeros(n, n);
    for k in 0..n {
        d[(k, k)] = c(0.0, args[k]);
    }
    let x = &u * d * u.adjoint();
    let skew = (&x - x.adjoint()) * c(0.5, 0.0);
    // remove the rounding residue of the trace
    let tr = skew.trace() / c(n as f64, 0.0);
    let clean = skew - CMat::identity(n, n) * tr;
    Ok(AlgebraElement::from_matrix_unchecked(clean))
}

/// `f(z) = (e^z − 1)/z` with the removable singularity handled by series.
fn dexp_factor(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        // 1 + z/2 + z²/6 + z³/24 + z⁴/120
        let z2 = z * z;
        c(1.0, 0.0) + z / 2.0 + z2 / 6.0 + z2 * z / 24.0 + z2 * z2 / 120.0
    } else {
        (z.exp() - c(1.0, 0.0)) / z
    }
}

fn apply_ad_function<F>(phi: &AlgebraElement, delta: &AlgebraElement, f: F) -> Result<AlgebraElement>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let n = phi.dim();
    let ad = ad_matrix(phi);
    let d = ad.nrows();
    // ad is real antisymmetric; −i·ad is Hermitian
    let h = CMat::from_fn(d, d, |i, j| c(0.0, -ad[(i, j)]));
    let se = h.symmetric_eigen();
    let u = se.eigenvectors;
    let coords = delta.coords();
    let cc = CVec::from_fn(d, |i, _| c(coords[i], 0.0));
    let w = u.adjoint() * cc;
    let mut scaled = CVec::zeros(d);
    for k in 0..d {
        scaled[k] = f(c(0.0, se.eigenvalues[k]))? * w[k];
    }
    let out = u * scaled;
    let real = RVec::from_fn(d, |i, _| out[i].re);
    AlgebraElement::from_coords(n, &real)
}

/// Right logarithmic derivative of the exponential map:
/// `dexp_right(φ, δ) = (d/dt e^{φ + tδ})|_{t=0} · e^{−φ} = f(ad_φ) δ`.
///
/// When [φ, δ] = 0 the result is δ exactly.
pub fn dexp_right(phi: &AlgebraElement, delta: &AlgebraElement) -> AlgebraElement {
    if phi.is_zero() || delta.is_zero() || phi.bracket(delta).is_zero() {
        return delta.clone();
    }
    apply_ad_function(phi, delta, |z| Ok(dexp_factor(z)))
        .expect("dexp factor is entire; cannot fail")
}

/// Inverse of `dexp_right(φ, ·)`: recovers δ from `b = f(ad_φ) δ`.
///
/// Fails with `CutLocus` when `f` vanishes on the spectrum of `ad_φ`
/// (arguments at nonzero multiples of 2π).
pub fn dexp_right_inv(phi: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    if phi.is_zero() || b.is_zero() || phi.bracket(b).is_zero() {
        return Ok(b.clone());
    }
    apply_ad_function(phi, b, |z| {
        let f = dexp_factor(z);
        if f.norm() < 1e-9 {
            Err(Error::CutLocus { arg: z.im })
        } else {
            Ok(c(1.0, 0.0) / f)
        }
    })
}

/// Cartan subalgebra, roots and root spaces of the complexified algebra.
pub struct RootDecomposition {
    /// Orthonormal diagonal Cartan basis.
    pub cartan_basis: Vec<AlgebraElement>,
    /// Root functionals: `roots[r][l]` is the value of α_r on `cartan_basis[l]`.
    pub roots: Vec<RVec>,
    /// For each root, a basis of the root space as complex coordinates over
    /// the orthonormal su(n) basis.
    pub root_spaces: Vec<Vec<CVec>>,
    /// Off-diagonal index pair (j, k) generating each root space.
    pub root_pairs: Vec<(usize, usize)>,
    pub n: usize,
}

/// Complex coordinates of a (not necessarily anti-Hermitian) traceless
/// matrix over the orthonormal su(n) basis, via the complex-bilinear
/// extension of the Killing pairing.
pub fn coords_complex(n: usize, y: &CMat) -> Result<CVec> {
    let basis = su_basis(n)?;
    let scale = c(-2.0 * n as f64, 0.0);
    Ok(CVec::from_fn(basis.dim, |i, _| {
        scale * (y * basis.elems[i].matrix()).trace()
    }))
}

/// Matrix with the given complex coordinates over the orthonormal su(n) basis.
pub fn matrix_from_coords_complex(n: usize, z: &CVec) -> Result<CMat> {
    let basis = su_basis(n)?;
    if z.len() != basis.dim {
        return Err(Error::DimensionMismatch {
            left: z.len(),
            right: basis.dim,
        });
    }
    let mut mat = CMat::zeros(n, n);
    for (i, b) in basis.elems.iter().enumerate() {
        mat += b.matrix() * z[i];
    }
    Ok(mat)
}

/// Root space decomposition of the complexification of su(n).
pub fn cartan_root_decompose(n: usize) -> Result<RootDecomposition> {
    let basis = su_basis(n)?;
    let cartan_basis: Vec<AlgebraElement> = basis
        .cartan_idx
        .iter()
        .map(|&i| basis.elems[i].clone())
        .collect();
    let rank = cartan_basis.len();
    let mut roots = Vec::new();
    let mut root_spaces = Vec::new();
    let mut root_pairs = Vec::new();
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            // h = i·diag(d): [h, E_jk] = i(d_j − d_k)·E_jk
            let alpha = RVec::from_fn(rank, |l, _| {
                let h = cartan_basis[l].matrix();
                h[(j, j)].im - h[(k, k)].im
            });
            let mut e = CMat::zeros(n, n);
            e[(j, k)] = c(1.0, 0.0);
            let coords = coords_complex(n, &e)?;
            roots.push(alpha);
            root_spaces.push(vec![coords]);
            root_pairs.push((j, k));
        }
    }
    let dec = RootDecomposition {
        cartan_basis,
        roots,
        root_spaces,
        root_pairs,
        n,
    };
    dec.validate()?;
    Ok(dec)
}

impl RootDecomposition {
    /// Value of root r on an element h of the Cartan subalgebra.
    pub fn root_value(&self, r: usize, h: &AlgebraElement) -> f64 {
        let (j, k) = self.root_pairs[r];
        h.matrix()[(j, j)].im - h.matrix()[(k, k)].im
    }

    /// Largest residual of `[h, e_α] − iα(h)·e_α` over all roots and
    /// Cartan basis elements.
    pub fn max_bracket_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (r, space) in self.root_spaces.iter().enumerate() {
            for v in space {
                let e = matrix_from_coords_complex(self.n, v).expect("stored coords");
                for (l, h) in self.cartan_basis.iter().enumerate() {
                    let lhs = h.matrix() * &e - &e * h.matrix();
                    let rhs = &e * c(0.0, self.roots[r][l]);
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        let dim_c = n * n - 1;
        let total: usize = self.cartan_basis.len() + self.root_spaces.iter().map(|s| s.len()).sum::<usize>();
        if total != dim_c {
            return Err(Error::Numerical(format!(
                "root decomposition dimension {total} != {dim_c}"
            )));
        }
        for (r, space) in self.root_spaces.iter().enumerate() {
            for v in space {
                let e = matrix_from_coords_complex(n, v)?;
                for (l, h) in self.cartan_basis.iter().enumerate() {
                    let lhs = h.matrix() * &e - &e * h.matrix();
                    let rhs = &e * c(0.0, self.roots[r][l]);
                    if (lhs - rhs).norm() > 1e-10 {
                        return Err(Error::Numerical(format!(
                            "root bracket residual for root {r} on cartan {l}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn basis_is_orthonormal() {
        for n in [2usize, 3] {
            let b = su_basis(n).unwrap();
            for i in 0..b.dim {
                for j in 0..b.dim {
                    let g = killing_inner(&b.elems[i], &b.elems[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-12, "su({n}) gram ({i},{j}) = {g}");
                }
            }
        }
    }

    #[test]
    fn killing_inner_matches_ad_trace_oracle() {
        // independent route: build ad matrices by Hilbert-Schmidt coefficient
        // extraction and take −Tr(adX adY) directly
        let mut r = rng(11);
        for n in [2usize, 3] {
            let basis = su_basis(n).unwrap();
            let hs = |a: &CMat, b: &CMat| (a * b.adjoint()).trace();
            let ad_hs = |x: &AlgebraElement| {
                let d = basis.dim;
                let mut m = RMat::zeros(d, d);
                for j in 0..d {
                    let col = x.bracket(&basis.elems[j]);
                    for i in 0..d {
                        let bi = basis.elems[i].matrix();
                        let num = hs(col.matrix(), bi);
                        let den = hs(bi, bi);
                        m[(i, j)] = (num / den).re;
                    }
                }
                m
            };
            for _ in 0..5 {
                let x = AlgebraElement::random(n, 1.0, &mut r).unwrap();
                let y = AlgebraElement::random(n, 1.0, &mut r).unwrap();
                let adx = ad_hs(&x);
                let ady = ad_hs(&y);
                let oracle = -(adx * ady).trace();
                let got = killing_inner(&x, &y);
                assert!(
                    (oracle - got).abs() <= 1e-12 * (1.0 + oracle.abs()),
                    "su({n}): killing {got} vs ad-trace oracle {oracle}"
                );
            }
        }
    }

    #[test]
    fn killing_positive_definite() {
        let mut r = rng(3);
        for n in [2usize, 3] {
            for _ in 0..10 {
                let x = AlgebraElement::random(n, 0.7, &mut r).unwrap();
                if !x.is_zero() {
                    assert!(killing_inner(&x, &x) > 0.0);
                }
            }
            assert_eq!(killing_inner(&AlgebraElement::zero(n), &AlgebraElement::zero(n)), 0.0);
        }
    }

    #[test]
    fn exp_of_zero_is_exact_identity() {
        let g = alg_exp(&AlgebraElement::zero(2));
        assert!(g.is_identity());
    }

    #[test]
    fn exp_inverse_symmetry() {
        let mut r = rng(5);
        for n in [2usize, 3] {
            let x = AlgebraElement::random(n, 1.1, &mut r).unwrap();
            let g = alg_exp(&x);
            let h = alg_exp(&x.scale(-1.0));
            let prod = g.mul(&h);
            assert!(
                (prod.matrix() - CMat::identity(n, n)).norm() < 1e-12,
                "exp(X)exp(−X) != I"
            );
        }
    }

    #[test]
    fn exp_matches_power_series_oracle() {
        let mut r = rng(7);
        let x = AlgebraElement::random(2, 0.9, &mut r).unwrap();
        // Σ X^k/k! truncated at 30 terms
        let mut term = CMat::identity(2, 2);
        let mut sum = CMat::identity(2, 2);
        for k in 1..=30 {
            term = &term * x.matrix() / c(k as f64, 0.0);
            sum += &term;
        }
        let g = alg_exp(&x);
        let rel = (g.matrix() - &sum).norm() / sum.norm();
        assert!(rel < 1e-12, "series oracle rel err {rel:.3e}");
    }

    #[test]
    fn log_of_identity_is_zero() {
        let x = alg_log(&GroupElement::identity(3)).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn log_exp_round_trip() {
        let mut r = rng(9);
        for n in [2usize, 3] {
            for _ in 0..8 {
                let x = AlgebraElement::random(n, 0.4, &mut r).unwrap();
                let g = alg_exp(&x);
                let y = alg_log(&g).unwrap();
                assert!(
                    (x.matrix() - y.matrix()).norm() < 1e-10,
                    "log(exp(X)) != X for small X"
                );
                let back = alg_exp(&y);
                assert!((back.matrix() - g.matrix()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn log_near_cut_locus_errors() {
        // eigenvalue arguments ±(π − 1e−8)
        let theta = std::f64::consts::PI - 1e-8;
        let x = AlgebraElement::new(CMat::from_row_slice(
            2,
            2,
            &[c(0.0, theta), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -theta)],
        ))
        .unwrap();
        let g = alg_exp(&x);
        match alg_log(&g) {
            Err(Error::CutLocus { .. }) => {}
            other => panic!("expected CutLocus, got {other:?}"),
        }
    }

    #[test]
    fn dexp_zero_phi_is_identity() {
        let mut r = rng(13);
        let d = AlgebraElement::random(2, 1.0, &mut r).unwrap();
        let out = dexp_right(&AlgebraElement::zero(2), &d);
        assert_eq!(out, d);
    }

    #[test]
    fn dexp_commuting_pair_is_exact() {
        // same Cartan direction: [φ, δ] = 0 ⇒ dexp_right(φ, δ) = δ
        let b = su_basis(2).unwrap();
        let h = &b.elems[b.cartan_idx[0]];
        let phi = h.scale(0.8);
        let delta = h.scale(-1.7);
        let out = dexp_right(&phi, &delta);
        assert_eq!(out, delta);
    }

    #[test]
    fn dexp_matches_finite_difference_oracle() {
        let mut r = rng(17);
        let h = 1e-5;
        for _ in 0..6 {
            let phi = AlgebraElement::random(2, 1.0, &mut r).unwrap();
            let delta = AlgebraElement::random(2, 1.0, &mut r).unwrap();
            let gp = alg_exp(&phi.add(&delta.scale(h)));
            let gm = alg_exp(&phi.add(&delta.scale(-h)));
            let ge = alg_exp(&phi.scale(-1.0));
            let fd = (gp.matrix() - gm.matrix()) * c(1.0 / (2.0 * h), 0.0) * ge.matrix();
            let out = dexp_right(&phi, &delta);
            let rel = (out.matrix() - &fd).norm() / out.matrix().norm().max(1e-14);
            assert!(rel < 1e-6, "dexp fd rel err {rel:.3e}");
        }
    }

    #[test]
    fn dexp_noncommuting_pair_differs_from_delta() {
        let b = su_basis(2).unwrap();
        let phi = b.elems[0].scale(1.0);
        let delta = b.elems[1].scale(1.0);
        let out = dexp_right(&phi, &delta);
        assert!(out.sub(&delta).norm() > 1e-3);
    }

    #[test]
    fn dexp_inverse_round_trip() {
        let mut r = rng(19);
        for n in [2usize, 3] {
            let phi = AlgebraElement::random(n, 0.8, &mut r).unwrap();
            let delta = AlgebraElement::random(n, 1.0, &mut r).unwrap();
            let b = dexp_right(&phi, &delta);
            let d2 = dexp_right_inv(&phi, &b).unwrap();
            assert!(d2.sub(&delta).norm() < 1e-11);
        }
    }

    #[test]
    fn adjoint_is_killing_isometry_and_homomorphism() {
        let mut r = rng(23);
        for n in [2usize, 3] {
            let x = AlgebraElement::random(n, 1.0, &mut r).unwrap();
            let y = AlgebraElement::random(n, 1.0, &mut r).unwrap();
            let g = alg_exp(&AlgebraElement::random(n, 0.9, &mut r).unwrap());
            assert_eq!(adjoint_action(&GroupElement::identity(n), &x), x);
            let gi = killing_inner(
                &adjoint_action(&g, &x),
                &adjoint_action(&g, &y),
            );
            assert!((gi - killing_inner(&x, &y)).abs() < 1e-12 * (1.0 + gi.abs()));
            // Ad(g, [X,Y]) = [Ad(g,X), Ad(g,Y)]
            let lhs = adjoint_action(&g, &x.bracket(&y));
            let rhs = adjoint_action(&g, &x).bracket(&adjoint_action(&g, &y));
            assert!(lhs.sub(&rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn adjoint_matrix_is_orthogonal() {
        let mut r = rng(29);
        for n in [2usize, 3] {
            let g = alg_exp(&AlgebraElement::random(n, 1.0, &mut r).unwrap());
            let m = adjoint_matrix(&g);
            let d = m.nrows();
            assert!((m.transpose() * &m - RMat::identity(d, d)).norm() < 1e-12);
        }
    }

    #[test]
    fn cartan_exp_is_homomorphism() {
        // commuting X, Y: exp(X+Y) = exp(X)exp(Y)
        let b = su_basis(3).unwrap();
        let x = b.elems[b.cartan_idx[0]].scale(0.9);
        let y = b.elems[b.cartan_idx[1]].scale(-1.3);
        let lhs = alg_exp(&x.add(&y));
        let rhs = alg_exp(&x).mul(&alg_exp(&y));
        assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-12);
    }

    #[test]
    fn root_decomposition_su2() {
        let d = cartan_root_decompose(2).unwrap();
        assert_eq!(d.cartan_basis.len(), 1);
        assert_eq!(d.root_spaces.len(), 2);
        assert_eq!(d.root_spaces[0].len(), 1);
        // two roots are ±α
        let a0 = &d.roots[0];
        let a1 = &d.roots[1];
        assert!((a0[0] + a1[0]).abs() < 1e-14);
    }

    #[test]
    fn root_decomposition_su3() {
        let d = cartan_root_decompose(3).unwrap();
        assert_eq!(d.cartan_basis.len(), 2);
        assert_eq!(d.root_spaces.len(), 6);
    }

    #[test]
    fn root_decomposition_unsupported_rank() {
        assert!(matches!(cartan_root_decompose(4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn root_bracket_relation() {
        // [h, e_α] = iα(h)·e_α for every cartan basis element and root vector
        for n in [2usize, 3] {
            let d = cartan_root_decompose(n).unwrap();
            for (r, space) in d.root_spaces.iter().enumerate() {
                for v in space {
                    let e = matrix_from_coords_complex(n, v).unwrap();
                    for (l, h) in d.cartan_basis.iter().enumerate() {
                        let lhs = h.matrix() * &e - &e * h.matrix();
                        let rhs = &e * c(0.0, d.roots[r][l]);
                        assert!((lhs - rhs).norm() <= 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn algebra_element_rejects_bad_matrices() {
        let not_traceless = CMat::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(AlgebraElement::new(not_traceless).is_err());
        let not_skew = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(AlgebraElement::new(not_skew).is_err());
    }

    #[test]
    fn group_element_rejects_non_unitary() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(GroupElement::new(m).is_err());
    }

    #[test]
    fn coords_round_trip() {
        let mut r = rng(31);
        for n in [2usize, 3] {
            let x = AlgebraElement::random(n, 1.3, &mut r).unwrap();
            let back = AlgebraElement::from_coords(n, &x.coords()).unwrap();
            assert!(x.sub(&back).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_coords_round_trip() {
        let mut r = rng(37);
        let x = AlgebraElement::random(3, 1.0, &mut r).unwrap();
        let y = AlgebraElement::random(3, 1.0, &mut r).unwrap();
        // generic traceless complex matrix x + i·y
        let m = x.matrix() + y.matrix() * c(0.0, 1.0);
        let z = coords_complex(3, &m).unwrap();
        let back = matrix_from_coords_complex(3, &z).unwrap();
        assert!((m - back).norm() < 1e-12);
    }
}
