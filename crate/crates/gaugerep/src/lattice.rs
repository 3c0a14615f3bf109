//! Sampled manifolds, regions, g-valued 1-forms and the jet model of the
//! gauge group.
//!
//! A gauge transformation is stored as a jet: per site, the group value
//! together with its exact right logarithmic derivative. The cocycle
//! identity for the jet product `(g₁g₂, b₁ + Ad(g₁)b₂)` is then definitional
//! rather than approximate.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::lie::{adjoint_action, alg_exp, dexp_right, AlgebraElement, GroupElement};
use crate::{CVec, RVec};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Topology descriptor of the sampled manifold.
#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    /// Circle of circumference 2π with `sites` equispaced samples.
    Circle { sites: usize },
    /// Flat 2-torus of side 2π × 2π with a `rows` × `cols` grid.
    Torus { rows: usize, cols: usize },
}

/// Discretized Riemannian manifold: sites, per-site cell volumes, topology.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledManifold {
    topology: Topology,
    coords: Vec<[f64; 2]>,
    cell_volume: Vec<f64>,
}

impl SampledManifold {
    pub fn circle(sites: usize) -> Result<Self> {
        if sites < 4 {
            return Err(Error::Numerical(format!(
                "manifold needs at least 4 sites, got {sites}"
            )));
        }
        let step = TAU / sites as f64;
        Ok(Self {
            topology: Topology::Circle { sites },
            coords: (0..sites).map(|k| [k as f64 * step, 0.0]).collect(),
            cell_volume: vec![step; sites],
        })
    }

    pub fn torus(rows: usize, cols: usize) -> Result<Self> {
        if rows * cols < 4 || rows < 2 || cols < 2 {
            return Err(Error::Numerical(format!(
                "torus grid {rows}x{cols} too small"
            )));
        }
        let dx = TAU / cols as f64;
        let dy = TAU / rows as f64;
        let mut coords = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                coords.push([c as f64 * dx, r as f64 * dy]);
            }
        }
        Ok(Self {
            topology: Topology::Torus { rows, cols },
            coords,
            cell_volume: vec![dx * dy; rows * cols],
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn sites(&self) -> usize {
        self.coords.len()
    }

    pub fn tangent_dim(&self) -> usize {
        match self.topology {
            Topology::Circle { .. } => 1,
            Topology::Torus { .. } => 2,
        }
    }

    pub fn cell_volume(&self, site: usize) -> f64 {
        self.cell_volume[site]
    }

    pub fn coord(&self, site: usize) -> [f64; 2] {
        self.coords[site]
    }

    /// Shortest wrapped displacement from `from` to `to`, componentwise.
    pub fn displacement(&self, from: usize, to: usize) -> [f64; 2] {
        let wrap = |d: f64| d - TAU * (d / TAU).round();
        let a = self.coords[from];
        let b = self.coords[to];
        match self.topology {
            Topology::Circle { .. } => [wrap(b[0] - a[0]), 0.0],
            Topology::Torus { .. } => [wrap(b[0] - a[0]), wrap(b[1] - a[1])],
        }
    }
}

/// Subset of the sites of a sampled manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    sites: BTreeSet<usize>,
    total: usize,
}

impl Region {
    pub fn new<I: IntoIterator<Item = usize>>(sites: I, total: usize) -> Result<Self> {
        let sites: BTreeSet<usize> = sites.into_iter().collect();
        if let Some(&max) = sites.iter().next_back() {
            if max >= total {
                return Err(Error::Numerical(format!(
                    "site index {max} out of range (total {total})"
                )));
            }
        }
        Ok(Self { sites, total })
    }

    pub fn empty(total: usize) -> Self {
        Self {
            sites: BTreeSet::new(),
            total,
        }
    }

    pub fn all(total: usize) -> Self {
        Self {
            sites: (0..total).collect(),
            total,
        }
    }

    /// Parses a descriptor: comma-separated site indices and inclusive
    /// ranges, e.g. `"0-7"`, `"3,5,9"`, `"0-3,12-15"`, `"all"`, `"empty"`.
    pub fn parse(descriptor: &str, total: usize) -> Result<Self> {
        let d = descriptor.trim();
        if d.eq_ignore_ascii_case("all") {
            return Ok(Self::all(total));
        }
        if d.is_empty() || d.eq_ignore_ascii_case("empty") {
            return Ok(Self::empty(total));
        }
        let mut sites = Vec::new();
        for part in d.split(',') {
            let part = part.trim();
            if let Some((a, b)) = part.split_once('-') {
                let a: usize = a.trim().parse().map_err(|_| Error::Config {
                    line: 0,
                    message: format!("bad region range '{part}'"),
                })?;
                let b: usize = b.trim().parse().map_err(|_| Error::Config {
                    line: 0,
                    message: format!("bad region range '{part}'"),
                })?;
                if a > b {
                    return Err(Error::Config {
                        line: 0,
                        message: format!("region range '{part}' is reversed"),
                    });
                }
                sites.extend(a..=b);
            } else {
                let s: usize = part.parse().map_err(|_| Error::Config {
                    line: 0,
                    message: format!("bad region site '{part}'"),
                })?;
                sites.push(s);
            }
        }
        Self::new(sites, total)
    }

    pub fn complement(&self) -> Self {
        Self {
            sites: (0..self.total).filter(|s| !self.sites.contains(s)).collect(),
            total: self.total,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            sites: self.sites.union(&other.sites).copied().collect(),
            total: self.total,
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.sites.is_subset(&other.sites)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.sites.is_disjoint(&other.sites)
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.contains(&site)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.sites.iter().copied()
    }
}

/// g-valued 1-form sampled at sites: per site, `tangent_dim` covector
/// components, each an algebra element.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    mani: SampledManifold,
    n: usize,
    comps: Vec<Vec<AlgebraElement>>,
}

impl OneForm {
    pub fn zero(mani: &SampledManifold, n: usize) -> Self {
        let td = mani.tangent_dim();
        Self {
            mani: mani.clone(),
            n,
            comps: (0..mani.sites())
                .map(|_| (0..td).map(|_| AlgebraElement::zero(n)).collect())
                .collect(),
        }
    }

    pub fn from_components(
        mani: &SampledManifold,
        n: usize,
        comps: Vec<Vec<AlgebraElement>>,
    ) -> Result<Self> {
        let td = mani.tangent_dim();
        if comps.len() != mani.sites() || comps.iter().any(|c| c.len() != td) {
            return Err(Error::DimensionMismatch {
                left: comps.len(),
                right: mani.sites(),
            });
        }
        Ok(Self {
            mani: mani.clone(),
            n,
            comps,
        })
    }

    pub fn manifold(&self) -> &SampledManifold {
        &self.mani
    }

    pub fn group_dim(&self) -> usize {
        self.n
    }

    pub fn component(&self, site: usize, mu: usize) -> &AlgebraElement {
        &self.comps[site][mu]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        Ok(Self {
            mani: self.mani.clone(),
            n: self.n,
            comps: zip_comps(&self.comps, &other.comps, |a, b| a.add(b)),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        Ok(Self {
            mani: self.mani.clone(),
            n: self.n,
            comps: zip_comps(&self.comps, &other.comps, |a, b| a.sub(b)),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mani: self.mani.clone(),
            n: self.n,
            comps: self
                .comps
                .iter()
                .map(|site| site.iter().map(|x| x.scale(s)).collect())
                .collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        inner(self, self)
            .expect("same-manifold by construction")
            .re
            .max(0.0)
            .sqrt()
    }

    /// Sites carrying at least one exactly nonzero component.
    pub fn support(&self) -> Region {
        let sites = (0..self.mani.sites()).filter(|&s| self.comps[s].iter().any(|x| !x.is_zero()));
        Region::new(sites, self.mani.sites()).expect("indices in range")
    }

    /// Real coordinates in the volume-weighted orthonormal basis of H₀.
    pub fn coords(&self) -> RVec {
        let dim_g = self.n * self.n - 1;
        let td = self.mani.tangent_dim();
        let mut v = RVec::zeros(self.mani.sites() * td * dim_g);
        for s in 0..self.mani.sites() {
            let w = self.mani.cell_volume(s).sqrt();
            for mu in 0..td {
                let c = self.comps[s][mu].coords();
                for i in 0..dim_g {
                    v[(s * td + mu) * dim_g + i] = w * c[i];
                }
            }
        }
        v
    }

    /// Complexified coordinates (imaginary part zero).
    pub fn hvec(&self) -> CVec {
        let r = self.coords();
        CVec::from_fn(r.len(), |i, _| Complex64::new(r[i], 0.0))
    }

    /// Rebuilds a real 1-form from volume-weighted coordinates.
    pub fn from_coords(mani: &SampledManifold, n: usize, v: &RVec) -> Result<Self> {
        let dim_g = n * n - 1;
        let td = mani.tangent_dim();
        if v.len() != mani.sites() * td * dim_g {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: mani.sites() * td * dim_g,
            });
        }
        let mut comps = Vec::with_capacity(mani.sites());
        for s in 0..mani.sites() {
            let w = mani.cell_volume(s).sqrt();
            let mut site = Vec::with_capacity(td);
            for mu in 0..td {
                let block = RVec::from_fn(dim_g, |i, _| v[(s * td + mu) * dim_g + i] / w);
                site.push(AlgebraElement::from_coords(n, &block)?);
            }
            comps.push(site);
        }
        Self::from_components(mani, n, comps)
    }
}

/// Dimension of the real coordinate space H₀ for a manifold and group.
pub fn h_dim(mani: &SampledManifold, n: usize) -> usize {
    mani.sites() * mani.tangent_dim() * (n * n - 1)
}

fn zip_comps<F>(
    a: &[Vec<AlgebraElement>],
    b: &[Vec<AlgebraElement>],
    f: F,
) -> Vec<Vec<AlgebraElement>>
where
    F: Fn(&AlgebraElement, &AlgebraElement) -> AlgebraElement,
{
    a.iter()
        .zip(b.iter())
        .map(|(sa, sb)| sa.iter().zip(sb.iter()).map(|(x, y)| f(x, y)).collect())
        .collect()
}

fn check_same(a: &OneForm, b: &OneForm) -> Result<()> {
    if a.mani != b.mani || a.n != b.n {
        return Err(Error::ManifoldMismatch);
    }
    Ok(())
}

/// Inner product of 1-forms: `Σ_x vol(x) Σ_μ ⟨ω₁, ω₂⟩_g`, linear in the
/// first argument. Real forms give a real value.
pub fn inner(a: &OneForm, b: &OneForm) -> Result<Complex64> {
    check_same(a, b)?;
    let td = a.mani.tangent_dim();
    let mut acc = 0.0;
    for s in 0..a.mani.sites() {
        let vol = a.mani.cell_volume(s);
        for mu in 0..td {
            acc += vol * crate::lie::killing_inner(&a.comps[s][mu], &b.comps[s][mu]);
        }
    }
    Ok(Complex64::new(acc, 0.0))
}

/// Compactly supported algebra-valued field with its differential: per
/// site, (φ, dφ) with dφ a covector of algebra elements.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraField {
    mani: SampledManifold,
    n: usize,
    values: Vec<AlgebraElement>,
    diffs: Vec<Vec<AlgebraElement>>,
}

impl AlgebraField {
    pub fn new(
        mani: &SampledManifold,
        n: usize,
        values: Vec<AlgebraElement>,
        diffs: Vec<Vec<AlgebraElement>>,
    ) -> Result<Self> {
        let td = mani.tangent_dim();
        if values.len() != mani.sites() || diffs.len() != mani.sites() {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: mani.sites(),
            });
        }
        if diffs.iter().any(|d| d.len() != td) {
            return Err(Error::DimensionMismatch {
                left: td,
                right: diffs.iter().map(|d| d.len()).max().unwrap_or(0),
            });
        }
        Ok(Self {
            mani: mani.clone(),
            n,
            values,
            diffs,
        })
    }

    pub fn zero(mani: &SampledManifold, n: usize) -> Self {
        let td = mani.tangent_dim();
        Self {
            mani: mani.clone(),
            n,
            values: vec![AlgebraElement::zero(n); mani.sites()],
            diffs: vec![vec![AlgebraElement::zero(n); td]; mani.sites()],
        }
    }

    pub fn manifold(&self) -> &SampledManifold {
        &self.mani
    }

    pub fn group_dim(&self) -> usize {
        self.n
    }

    pub fn value(&self, site: usize) -> &AlgebraElement {
        &self.values[site]
    }

    pub fn diff(&self, site: usize, mu: usize) -> &AlgebraElement {
        &self.diffs[site][mu]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mani: self.mani.clone(),
            n: self.n,
            values: self.values.iter().map(|x| x.scale(s)).collect(),
            diffs: self
                .diffs
                .iter()
                .map(|d| d.iter().map(|x| x.scale(s)).collect())
                .collect(),
        }
    }

    /// The differential as a 1-form.
    pub fn differential(&self) -> OneForm {
        OneForm::from_components(&self.mani, self.n, self.diffs.clone())
            .expect("dimensions consistent by construction")
    }

    pub fn support(&self) -> Region {
        let sites = (0..self.mani.sites()).filter(|&s| {
            !self.values[s].is_zero() || self.diffs[s].iter().any(|x| !x.is_zero())
        });
        Region::new(sites, self.mani.sites()).expect("indices in range")
    }

    /// Random field supported exactly in `region`, coordinates ~ scale·N(0,1).
    pub fn random_in_region<R: rand::Rng>(
        mani: &SampledManifold,
        n: usize,
        region: &Region,
        scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let td = mani.tangent_dim();
        let mut values = Vec::with_capacity(mani.sites());
        let mut diffs = Vec::with_capacity(mani.sites());
        for s in 0..mani.sites() {
            if region.contains(s) {
                values.push(AlgebraElement::random(n, scale, rng)?);
                diffs.push(
                    (0..td)
                        .map(|_| AlgebraElement::random(n, scale, rng))
                        .collect::<Result<Vec<_>>>()?,
                );
            } else {
                values.push(AlgebraElement::zero(n));
                diffs.push(vec![AlgebraElement::zero(n); td]);
            }
        }
        Self::new(mani, n, values, diffs)
    }

    /// Random field of the form (f·X₀, h_μ·X₀) with a single direction X₀:
    /// value and differential commute pointwise, so the jet of e^φ carries
    /// exactly dφ.
    pub fn random_ray_in_region<R: rand::Rng>(
        mani: &SampledManifold,
        n: usize,
        region: &Region,
        scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let td = mani.tangent_dim();
        let dir = AlgebraElement::random(n, 1.0, rng)?;
        let normal = rand_distr::StandardNormal;
        let mut values = Vec::with_capacity(mani.sites());
        let mut diffs = Vec::with_capacity(mani.sites());
        for s in 0..mani.sites() {
            if region.contains(s) {
                let f: f64 = normal.sample(rng);
                values.push(dir.scale(scale * f));
                diffs.push(
                    (0..td)
                        .map(|_| {
                            let h: f64 = normal.sample(rng);
                            dir.scale(scale * h)
                        })
                        .collect(),
                );
            } else {
                values.push(AlgebraElement::zero(n));
                diffs.push(vec![AlgebraElement::zero(n); td]);
            }
        }
        Self::new(mani, n, values, diffs)
    }
}

/// Smooth bump field: value `f(r) = e^{−r²/(1−r²)}·direction` inside the
/// radius, exact zero outside, with the analytic derivative sampled at
/// sites.
pub fn bump_algebra_field(
    mani: &SampledManifold,
    center: usize,
    radius: f64,
    direction: &AlgebraElement,
) -> Result<AlgebraField> {
    if radius <= 0.0 {
        return Err(Error::DegenerateSupport);
    }
    let n = direction.dim();
    let td = mani.tangent_dim();
    let mut values = Vec::with_capacity(mani.sites());
    let mut diffs = Vec::with_capacity(mani.sites());
    let mut interior = 0usize;
    let mut exterior = 0usize;
    for s in 0..mani.sites() {
        let d = mani.displacement(center, s);
        let u = (d[0] * d[0] + d[1] * d[1]) / (radius * radius);
        if u < 1.0 {
            interior += 1;
            // f = e^{−u/(1−u)}, df/du = −f/(1−u)², ∂u/∂x_μ = 2·d_μ/radius²
            let f = (-u / (1.0 - u)).exp();
            let dfdu = -f / ((1.0 - u) * (1.0 - u));
            values.push(direction.scale(f));
            diffs.push(
                (0..td)
                    .map(|mu| direction.scale(dfdu * 2.0 * d[mu] / (radius * radius)))
                    .collect(),
            );
        } else {
            exterior += 1;
            values.push(AlgebraElement::zero(n));
            diffs.push(vec![AlgebraElement::zero(n); td]);
        }
    }
    if interior == 0 || exterior == 0 {
        return Err(Error::DegenerateSupport);
    }
    AlgebraField::new(mani, n, values, diffs)
}

/// Gauge transformation carried with its exact right logarithmic
/// derivative: per site, (group value, b) with `b = dψ·ψ⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeJet {
    mani: SampledManifold,
    n: usize,
    gs: Vec<GroupElement>,
    bs: Vec<Vec<AlgebraElement>>,
}

impl GaugeJet {
    pub fn identity(mani: &SampledManifold, n: usize) -> Self {
        let td = mani.tangent_dim();
        Self {
            mani: mani.clone(),
            n,
            gs: vec![GroupElement::identity(n); mani.sites()],
            bs: vec![vec![AlgebraElement::zero(n); td]; mani.sites()],
        }
    }

    /// Jet with prescribed group values and logarithmic derivative.
    pub fn from_site_data(
        mani: &SampledManifold,
        n: usize,
        gs: Vec<GroupElement>,
        bs: Vec<Vec<AlgebraElement>>,
    ) -> Result<Self> {
        let td = mani.tangent_dim();
        if gs.len() != mani.sites() || bs.len() != mani.sites() || bs.iter().any(|b| b.len() != td)
        {
            return Err(Error::DimensionMismatch {
                left: gs.len(),
                right: mani.sites(),
            });
        }
        Ok(Self {
            mani: mani.clone(),
            n,
            gs,
            bs,
        })
    }

    pub fn manifold(&self) -> &SampledManifold {
        &self.mani
    }

    pub fn group_dim(&self) -> usize {
        self.n
    }

    pub fn group_value(&self, site: usize) -> &GroupElement {
        &self.gs[site]
    }

    pub fn b_component(&self, site: usize, mu: usize) -> &AlgebraElement {
        &self.bs[site][mu]
    }

    /// The b-field as a 1-form (the Maurer–Cartan cocycle value).
    pub fn b_oneform(&self) -> OneForm {
        OneForm::from_components(&self.mani, self.n, self.bs.clone())
            .expect("dimensions consistent by construction")
    }

    pub fn support(&self) -> Region {
        let sites = (0..self.mani.sites())
            .filter(|&s| !self.gs[s].is_identity() || self.bs[s].iter().any(|x| !x.is_zero()));
        Region::new(sites, self.mani.sites()).expect("indices in range")
    }

    pub fn is_identity(&self) -> bool {
        self.support().is_empty()
    }

    /// Max over sites of operator-norm distance of g to the identity plus
    /// the largest Killing norm of a b-component (the N₀ metric).
    pub fn deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for s in 0..self.mani.sites() {
            let mut d = self.gs[s].distance_to_identity();
            for b in &self.bs[s] {
                d += b.norm();
            }
            dev = dev.max(d);
        }
        dev
    }
}

fn check_same_jet(a: &GaugeJet, b: &GaugeJet) -> Result<()> {
    if a.mani != b.mani || a.n != b.n {
        return Err(Error::ManifoldMismatch);
    }
    Ok(())
}

/// Pointwise product of gauge jets: `(g₁g₂, b₁ + Ad(g₁)b₂)` per site.
pub fn jet_mul(a: &GaugeJet, b: &GaugeJet) -> Result<GaugeJet> {
    check_same_jet(a, b)?;
    let mut gs = Vec::with_capacity(a.gs.len());
    let mut bs = Vec::with_capacity(a.bs.len());
    for s in 0..a.mani.sites() {
        gs.push(a.gs[s].mul(&b.gs[s]));
        bs.push(
            a.bs[s]
                .iter()
                .zip(b.bs[s].iter())
                .map(|(ba, bb)| ba.add(&adjoint_action(&a.gs[s], bb)))
                .collect(),
        );
    }
    GaugeJet::from_site_data(&a.mani, a.n, gs, bs)
}

/// Pointwise inverse: `(g⁻¹, −Ad(g⁻¹)b)` per site.
pub fn jet_inv(a: &GaugeJet) -> GaugeJet {
    let mut gs = Vec::with_capacity(a.gs.len());
    let mut bs = Vec::with_capacity(a.bs.len());
    for s in 0..a.mani.sites() {
        let gi = a.gs[s].inverse();
        bs.push(
            a.bs[s]
                .iter()
                .map(|b| adjoint_action(&gi, b).scale(-1.0))
                .collect(),
        );
        gs.push(gi);
    }
    GaugeJet::from_site_data(&a.mani, a.n, gs, bs).expect("same dimensions")
}

/// k-fold jet power by repeated multiplication.
pub fn jet_pow(a: &GaugeJet, k: usize) -> Result<GaugeJet> {
    let mut acc = GaugeJet::identity(&a.mani, a.n);
    for _ in 0..k {
        acc = jet_mul(&acc, a)?;
    }
    Ok(acc)
}

/// Jet of `x ↦ exp(s·φ(x))` with the exact right logarithmic derivative
/// `b_μ = dexp_right(sφ, s·∂_μφ)`. Cartan-valued fields give `b = s·dφ`
/// exactly.
pub fn jet_from_algebra_field(field: &AlgebraField, s: f64) -> GaugeJet {
    let n = field.n;
    let td = field.mani.tangent_dim();
    let mut gs = Vec::with_capacity(field.mani.sites());
    let mut bs = Vec::with_capacity(field.mani.sites());
    for site in 0..field.mani.sites() {
        let phi = field.values[site].scale(s);
        gs.push(alg_exp(&phi));
        bs.push(
            (0..td)
                .map(|mu| dexp_right(&phi, &field.diffs[site][mu].scale(s)))
                .collect(),
        );
    }
    GaugeJet::from_site_data(&field.mani, n, gs, bs).expect("same dimensions")
}

/// Random jet supported exactly in `region`, built from a random algebra field.
pub fn random_jet_in_region<R: rand::Rng>(
    mani: &SampledManifold,
    n: usize,
    region: &Region,
    scale: f64,
    rng: &mut R,
) -> Result<GaugeJet> {
    let field = AlgebraField::random_in_region(mani, n, region, scale, rng)?;
    Ok(jet_from_algebra_field(&field, 1.0))
}
