//! Index arithmetic on `⊗^M C^N` and matrix-free permutation operators.
//!
//! Basis convention: a multi-index `(i_1, …, i_M)` is stored row-major, so
//! site 0 is the slowest-varying digit. Every module relies on this.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type DensityMatrix = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Above this many 2x2 minors the pure-state linear entropy falls back to
/// the reduced-density route.
const MINOR_BUDGET: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParticleKind {
    Distinguishable,
    Boson,
    Fermion,
}

impl std::fmt::Display for ParticleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ParticleKind::Distinguishable => "distinguishable",
            ParticleKind::Boson => "boson",
            ParticleKind::Fermion => "fermion",
        })
    }
}

impl std::str::FromStr for ParticleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinguishable" => Ok(ParticleKind::Distinguishable),
            "boson" => Ok(ParticleKind::Boson),
            "fermion" => Ok(ParticleKind::Fermion),
            other => Err(Error::Validation(format!(
                "unknown particle kind `{other}`"
            ))),
        }
    }
}

/// Particle kind, particle count `L` and single-particle dimension `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemShape {
    kind: ParticleKind,
    particles: usize,
    modes: usize,
}

impl SystemShape {
    pub fn new(kind: ParticleKind, particles: usize, modes: usize) -> Result<Self> {
        if particles == 0 || modes == 0 {
            return Err(Error::Shape(format!(
                "need L >= 1 and N >= 1, got L={particles}, N={modes}"
            )));
        }
        if particles > 16 {
            return Err(Error::Shape(format!(
                "L={particles} exceeds the supported 16 sites"
            )));
        }
        if kind == ParticleKind::Fermion && modes < particles {
            return Err(Error::Shape(format!(
                "fermions need N >= L, got L={particles}, N={modes}"
            )));
        }
        let two_copy = u32::try_from(2 * particles)
            .ok()
            .and_then(|e| modes.checked_pow(e));
        if two_copy.is_none() {
            return Err(Error::Shape(format!(
                "two-copy dimension {modes}^{} overflows",
                2 * particles
            )));
        }
        Ok(Self {
            kind,
            particles,
            modes,
        })
    }

    pub fn kind(&self) -> ParticleKind {
        self.kind
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn with_kind(&self, kind: ParticleKind) -> Result<Self> {
        Self::new(kind, self.particles, self.modes)
    }

    /// `N^L`.
    pub fn hilbert_dim(&self) -> usize {
        self.modes.pow(self.particles as u32)
    }

    /// `N^(2L)`.
    pub fn two_copy_dim(&self) -> usize {
        self.modes.pow(2 * self.particles as u32)
    }

    /// `2^L / (L + 1)`, the fermionic normalization factor.
    pub fn alpha(&self) -> f64 {
        alpha(self.particles)
    }
}

pub fn alpha(particles: usize) -> f64 {
    2f64.powi(particles as i32) / (particles as f64 + 1.0)
}

/// Amplitude vector over `⊗^M C^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplitudes {
    modes: usize,
    sites: usize,
    data: Vec<C64>,
}

impl Amplitudes {
    pub fn new(modes: usize, sites: usize, data: Vec<C64>) -> Result<Self> {
        let dim = checked_dim(modes, sites)?;
        if data.len() != dim {
            return Err(Error::Shape(format!(
                "expected {dim} = {modes}^{sites} amplitudes, got {}",
                data.len()
            )));
        }
        Ok(Self { modes, sites, data })
    }

    pub fn zeros(modes: usize, sites: usize) -> Result<Self> {
        let dim = checked_dim(modes, sites)?;
        Ok(Self {
            modes,
            sites,
            data: vec![ZERO; dim],
        })
    }

    /// Computational basis vector `|i_1 … i_M⟩` (0-based digits).
    pub fn basis(modes: usize, digits: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(modes, digits.len())?;
        let idx = v.index_of(digits)?;
        v.data[idx] = ONE;
        Ok(v)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.sites {
            return Err(Error::Shape(format!(
                "multi-index has {} digits, expected {}",
                digits.len(),
                self.sites
            )));
        }
        let mut idx = 0usize;
        for &d in digits {
            if d >= self.modes {
                return Err(Error::Shape(format!(
                    "digit {d} out of range 0..{}",
                    self.modes
                )));
            }
            idx = idx * self.modes + d;
        }
        Ok(idx)
    }

    pub fn digits_of(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0; self.sites];
        for d in digits.iter_mut().rev() {
            *d = idx % self.modes;
            idx /= self.modes;
        }
        digits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::Validation(format!(
                "cannot normalize vector of norm {n}"
            )));
        }
        self.scale_mut(C64::new(1.0 / n, 0.0));
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale_mut(&mut self, s: C64) {
        self.data.iter_mut().for_each(|z| *z *= s);
    }

    pub fn scaled(mut self, s: C64) -> Self {
        self.scale_mut(s);
        self
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += b);
    }

    pub fn axpy(&mut self, s: C64, other: &Self) {
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += s * b);
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|self⟩ ⊗ |other⟩`, with the sites of `self` first.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::Shape("tensor factors must share N".into()));
        }
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            data.extend(other.data.iter().map(|b| a * b));
        }
        Self::new(self.modes, self.sites + other.sites, data)
    }

    pub(crate) fn from_parts_unchecked(modes: usize, sites: usize, data: Vec<C64>) -> Self {
        Self { modes, sites, data }
    }
}

fn checked_dim(modes: usize, sites: usize) -> Result<usize> {
    if modes == 0 {
        return Err(Error::Shape("N must be at least 1".into()));
    }
    u32::try_from(sites)
        .ok()
        .and_then(|e| modes.checked_pow(e))
        .ok_or_else(|| Error::Shape(format!("{modes}^{sites} overflows")))
}

fn strides(modes: usize, sites: usize) -> Vec<usize> {
    let mut s = vec![1usize; sites];
    for k in (0..sites.saturating_sub(1)).rev() {
        s[k] = s[k + 1] * modes;
    }
    s
}

/// Bijection on site indices `0..M`: tensor factor `k` moves to site `map[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SitePermutation {
    map: Vec<usize>,
}

impl SitePermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &t in &map {
            if t >= map.len() || seen[t] {
                return Err(Error::Shape(format!("{map:?} is not a permutation")));
            }
            seen[t] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(sites: usize) -> Self {
        Self {
            map: (0..sites).collect(),
        }
    }

    pub fn transposition(sites: usize, a: usize, b: usize) -> Result<Self> {
        if a >= sites || b >= sites {
            return Err(Error::Shape(format!(
                "transposition ({a} {b}) out of range 0..{sites}"
            )));
        }
        let mut p = Self::identity(sites);
        p.map.swap(a, b);
        Ok(p)
    }

    pub fn sites(&self) -> usize {
        self.map.len()
    }

    pub fn image(&self, k: usize) -> usize {
        self.map[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn sign(&self) -> i32 {
        let mut visited = vec![false; self.map.len()];
        let mut sign = 1;
        for start in 0..self.map.len() {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !visited[k] {
                visited[k] = true;
                k = self.map[k];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (k, &t) in self.map.iter().enumerate() {
            inv[t] = k;
        }
        Self { map: inv }
    }
}

/// Subset of sites `0..width`, stored as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: u64,
    width: usize,
}

impl SubsetMask {
    pub fn new(bits: u64, width: usize) -> Result<Self> {
        if width > 63 {
            return Err(Error::Shape(format!("mask width {width} too large")));
        }
        if bits >> width != 0 {
            return Err(Error::Shape(format!(
                "mask {bits:#b} exceeds {width} sites"
            )));
        }
        Ok(Self { bits, width })
    }

    pub fn from_sites(sites: &[usize], width: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &s in sites {
            if s >= width {
                return Err(Error::Shape(format!("site {s} out of range 0..{width}")));
            }
            bits |= 1 << s;
        }
        Self::new(bits, width)
    }

    pub fn empty(width: usize) -> Self {
        Self { bits: 0, width }
    }

    pub fn full(width: usize) -> Self {
        Self {
            bits: (1u64 << width) - 1,
            width,
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, site: usize) -> bool {
        site < self.width && self.bits >> site & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: !self.bits & ((1u64 << self.width) - 1),
            width: self.width,
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&s| self.contains(s))
    }

    /// All `2^width` subsets in increasing bit order.
    pub fn all(width: usize) -> impl Iterator<Item = SubsetMask> {
        (0..1u64 << width).map(move |bits| SubsetMask { bits, width })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// Moves tensor factor `k` of `v` to site `perm.image(k)`.
pub fn apply_site_permutation(v: &Amplitudes, perm: &SitePermutation) -> Result<Amplitudes> {
    if perm.sites() != v.sites {
        return Err(Error::Shape(format!(
            "permutation acts on {} sites, vector has {}",
            perm.sites(),
            v.sites
        )));
    }
    Ok(permute_unchecked(v, perm.as_slice()))
}

fn permute_unchecked(v: &Amplitudes, map: &[usize]) -> Amplitudes {
    let m = v.sites;
    let n = v.modes;
    let out_strides = strides(n, m);
    // output stride carried by each input digit
    let carry: Vec<usize> = map.iter().map(|&t| out_strides[t]).collect();
    let mut out = vec![ZERO; v.data.len()];
    let mut digits = vec![0usize; m];
    let mut j = 0usize;
    for &amp in &v.data {
        out[j] = amp;
        for k in (0..m).rev() {
            digits[k] += 1;
            j += carry[k];
            if digits[k] < n {
                break;
            }
            digits[k] = 0;
            j -= n * carry[k];
        }
    }
    Amplitudes::from_parts_unchecked(n, m, out)
}

fn two_copy_particles(v: &Amplitudes) -> Result<usize> {
    if !v.sites.is_multiple_of(2) {
        return Err(Error::Shape(format!(
            "two-copy vector needs an even site count, got {}",
            v.sites
        )));
    }
    Ok(v.sites / 2)
}

fn copy_swap_map(particles: usize, mask: u64) -> Vec<usize> {
    let mut map: Vec<usize> = (0..2 * particles).collect();
    for i in 0..particles {
        if mask >> i & 1 == 1 {
            map.swap(i, particles + i);
        }
    }
    map
}

/// Exchanges site `i` of the first copy with site `i'` of the second copy
/// for every `i` in `mask`. `v` lives on `2L` sites, `mask` on `L`.
pub fn apply_copy_swap(v: &Amplitudes, mask: SubsetMask) -> Result<Amplitudes> {
    let l = two_copy_particles(v)?;
    if mask.width() != l {
        return Err(Error::Shape(format!(
            "copy-swap mask covers {} sites, vector has L={l}",
            mask.width()
        )));
    }
    Ok(permute_unchecked(v, &copy_swap_map(l, mask.bits())))
}

/// `P⁺_{ii'} v = (v + swap_{ii'} v) / 2`.
pub fn apply_pairwise_symmetrizer(v: &Amplitudes, site: usize) -> Result<Amplitudes> {
    let l = two_copy_particles(v)?;
    if site >= l {
        return Err(Error::Shape(format!("site {site} out of range 0..{l}")));
    }
    let mut out = permute_unchecked(v, &copy_swap_map(l, 1 << site));
    out.add_assign(v);
    out.scale_mut(C64::new(0.5, 0.0));
    Ok(out)
}

/// `P⁺_{11'} ∘ … ∘ P⁺_{LL'}`, expanded as `2^{-L}` times the sum of all
/// `2^L` copy swaps. Terms are accumulated in mask order, so the result is
/// deterministic.
pub fn apply_product_symmetrizer(v: &Amplitudes) -> Result<Amplitudes> {
    let l = two_copy_particles(v)?;
    let mut acc = v.clone();
    for mask in 1..1u64 << l {
        let term = permute_unchecked(v, &copy_swap_map(l, mask));
        acc.add_assign(&term);
    }
    acc.scale_mut(C64::new(0.5f64.powi(l as i32), 0.0));
    Ok(acc)
}

/// Same operator as [`apply_product_symmetrizer`], composed one pair at a time.
pub fn apply_product_symmetrizer_composed(v: &Amplitudes) -> Result<Amplitudes> {
    let l = two_copy_particles(v)?;
    let mut out = v.clone();
    for i in 0..l {
        out = apply_pairwise_symmetrizer(&out, i)?;
    }
    Ok(out)
}

/// All permutations of `0..k` with their signs, in lexicographic order.
pub(crate) fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, i32)> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        let sign = SitePermutation {
            map: current.clone(),
        }
        .sign();
        out.push((current.clone(), sign));
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// `(1/|S|!) Σ_σ (sgn σ)^parity σ v` with `σ` ranging over permutations of the
/// sites in `sites`; other sites are untouched.
pub fn apply_total_symmetrizer(
    v: &Amplitudes,
    sites: SubsetMask,
    parity: Parity,
) -> Result<Amplitudes> {
    if sites.width() != v.sites {
        return Err(Error::Shape(format!(
            "site mask covers {} sites, vector has {}",
            sites.width(),
            v.sites
        )));
    }
    let chosen: Vec<usize> = sites.sites().collect();
    let k = chosen.len();
    if k > 10 {
        return Err(Error::Shape(format!(
            "refusing to enumerate {k}! permutations"
        )));
    }
    let perms = permutations_with_sign(k);
    let mut acc = Amplitudes::from_parts_unchecked(v.modes, v.sites, vec![ZERO; v.dim()]);
    let mut map: Vec<usize> = (0..v.sites).collect();
    for (p, sign) in &perms {
        for (a, &b) in p.iter().enumerate() {
            map[chosen[a]] = chosen[b];
        }
        let term = permute_unchecked(v, &map);
        let w = match parity {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => f64::from(*sign),
        };
        acc.axpy(C64::new(w, 0.0), &term);
    }
    acc.scale_mut(C64::new(1.0 / perms.len() as f64, 0.0));
    Ok(acc)
}

fn check_square(rho: &DensityMatrix, modes: usize, sites: usize) -> Result<()> {
    let dim = checked_dim(modes, sites)?;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::Shape(format!(
            "density matrix is {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(())
}

/// Splits every full index into (kept index, traced index).
fn split_indices(modes: usize, keep: SubsetMask) -> (usize, usize, Vec<(usize, usize)>) {
    let sites = keep.width();
    let dim = modes.pow(sites as u32);
    let kept = modes.pow(keep.len() as u32);
    let rest = dim / kept;
    let mut out = Vec::with_capacity(dim);
    let mut digits = vec![0usize; sites];
    for _ in 0..dim {
        let (mut a, mut r) = (0, 0);
        for (s, &d) in digits.iter().enumerate() {
            if keep.contains(s) {
                a = a * modes + d;
            } else {
                r = r * modes + d;
            }
        }
        out.push((a, r));
        for k in (0..sites).rev() {
            digits[k] += 1;
            if digits[k] < modes {
                break;
            }
            digits[k] = 0;
        }
    }
    (kept, rest, out)
}

/// Reduced density matrix on the sites in `keep`.
pub fn partial_trace(rho: &DensityMatrix, modes: usize, keep: SubsetMask) -> Result<DensityMatrix> {
    check_square(rho, modes, keep.width())?;
    if keep.is_empty() {
        return Err(Error::Contract(
            "partial trace needs at least one kept site".into(),
        ));
    }
    if keep.is_full() {
        return Ok(rho.clone());
    }
    let (kept, rest, split) = split_indices(modes, keep);
    let mut by_rest = vec![vec![0usize; kept]; rest];
    for (full, &(a, r)) in split.iter().enumerate() {
        by_rest[r][a] = full;
    }
    let mut out = DensityMatrix::zeros(kept, kept);
    for group in &by_rest {
        for (a, &ia) in group.iter().enumerate() {
            for (b, &ib) in group.iter().enumerate() {
                out[(a, b)] += rho[(ia, ib)];
            }
        }
    }
    Ok(out)
}

/// `tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let n = rho.nrows();
    let mut acc = 0.0;
    for a in 0..n {
        for b in 0..n {
            acc += (rho[(a, b)] * rho[(b, a)]).re;
        }
    }
    acc
}

/// `tr ρ_S²` with the conventions `tr ρ_∅² = (tr ρ)²` and `ρ_full = ρ`.
pub fn subset_purity(rho: &DensityMatrix, modes: usize, keep: SubsetMask) -> Result<f64> {
    if keep.is_empty() {
        check_square(rho, modes, keep.width())?;
        let t = rho.trace();
        return Ok(t.norm_sqr());
    }
    Ok(purity(&partial_trace(rho, modes, keep)?))
}

/// `tr((ρ⊗ρ) W_S)` where `W_S` is the copy swap on the sites in `mask`,
/// evaluated directly from matrix elements of `ρ` without partial traces.
pub fn swap_trace(rho: &DensityMatrix, modes: usize, mask: SubsetMask) -> Result<f64> {
    check_square(rho, modes, mask.width())?;
    let l = mask.width();
    let dim = rho.nrows();
    let st = strides(modes, l);
    let digits_of = |mut i: usize| {
        let mut d = vec![0usize; l];
        for x in d.iter_mut().rev() {
            *x = i % modes;
            i /= modes;
        }
        d
    };
    let all: Vec<Vec<usize>> = (0..dim).map(digits_of).collect();
    let mut acc = ZERO;
    for c in 0..dim {
        for d in 0..dim {
            let (mut c2, mut d2) = (c, d);
            for s in mask.sites() {
                let (x, y) = (all[c][s], all[d][s]);
                c2 = c2 - x * st[s] + y * st[s];
                d2 = d2 - y * st[s] + x * st[s];
            }
            acc += rho[(c, c2)] * rho[(d, d2)];
        }
    }
    Ok(acc.re)
}

/// Applies the single-site operator `op` (an `N × N` matrix) to site `site`.
pub fn apply_local_operator(v: &Amplitudes, site: usize, op: &DMatrix<C64>) -> Result<Amplitudes> {
    if site >= v.sites {
        return Err(Error::Shape(format!(
            "site {site} out of range 0..{}",
            v.sites
        )));
    }
    if op.nrows() != v.modes || op.ncols() != v.modes {
        return Err(Error::Shape(format!(
            "local operator is {}x{}, expected {n}x{n}",
            op.nrows(),
            op.ncols(),
            n = v.modes
        )));
    }
    let n = v.modes;
    let stride = strides(n, v.sites)[site];
    let block = stride * n;
    let mut out = vec![ZERO; v.dim()];
    for base in (0..v.dim()).step_by(block) {
        for low in 0..stride {
            let at = |d: usize| base + d * stride + low;
            for a in 0..n {
                let mut acc = ZERO;
                for b in 0..n {
                    acc += op[(a, b)] * v.data[at(b)];
                }
                out[at(a)] = acc;
            }
        }
    }
    Ok(Amplitudes::from_parts_unchecked(n, v.sites, out))
}

/// `ψ` reshaped to a `(kept, traced)` matrix.
pub fn bipartite_matrix(psi: &Amplitudes, keep: SubsetMask) -> Result<DMatrix<C64>> {
    if keep.width() != psi.sites {
        return Err(Error::Shape(format!(
            "mask covers {} sites, state has {}",
            keep.width(),
            psi.sites
        )));
    }
    let (kept, rest, split) = split_indices(psi.modes, keep);
    let mut m = DMatrix::zeros(kept, rest);
    for (full, &(a, r)) in split.iter().enumerate() {
        m[(a, r)] = psi.data[full];
    }
    Ok(m)
}

/// `ρ_S = tr_{S^c} |ψ⟩⟨ψ|`.
pub fn reduced_density_pure(psi: &Amplitudes, keep: SubsetMask) -> Result<DensityMatrix> {
    let m = bipartite_matrix(psi, keep)?;
    Ok(&m * m.adjoint())
}

/// `(tr ρ_S)² − tr ρ_S²` for `ρ_S` the marginal of `|ψ⟩⟨ψ|`.
///
/// Computed as twice the sum of squared 2x2 minors of the reshaped state, so
/// product states give exactly-small values instead of `1 − (1 ± ε)`.
pub fn linear_entropy_pure(psi: &Amplitudes, keep: SubsetMask) -> Result<f64> {
    if keep.is_empty() || keep.is_full() {
        if keep.width() != psi.sites {
            return Err(Error::Shape("mask width does not match state".into()));
        }
        return Ok(0.0);
    }
    let m = bipartite_matrix(psi, keep)?;
    let (rows, cols) = m.shape();
    let pairs = rows * (rows - 1) / 2 * (cols * cols.saturating_sub(1) / 2);
    if pairs > MINOR_BUDGET {
        let rho = &m * m.adjoint();
        let t = rho.trace().re;
        return Ok((t * t - purity(&rho)).max(0.0));
    }
    let mut acc = 0.0;
    for a in 0..rows {
        for b in a + 1..rows {
            for r in 0..cols {
                let (ar, br) = (m[(a, r)], m[(b, r)]);
                for s in r + 1..cols {
                    acc += (ar * m[(b, s)] - m[(a, s)] * br).norm_sqr();
                }
            }
        }
    }
    Ok(2.0 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell() -> Amplitudes {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Amplitudes::new(2, 2, vec![c(s), ZERO, ZERO, c(s)]).unwrap()
    }

    #[test]
    fn shape_rejects_fermions_with_too_few_modes() {
        assert!(SystemShape::new(ParticleKind::Fermion, 3, 2).is_err());
        assert!(SystemShape::new(ParticleKind::Boson, 3, 2).is_ok());
        assert!(SystemShape::new(ParticleKind::Distinguishable, 0, 2).is_err());
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(1), 1.0);
        assert!((alpha(2) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(alpha(3), 2.0);
    }

    #[test]
    fn identity_permutation_is_noop() {
        let v = Amplitudes::new(
            3,
            2,
            (0..9).map(|k| C64::new(k as f64, -(k as f64))).collect(),
        )
        .unwrap();
        let w = apply_site_permutation(&v, &SitePermutation::identity(2)).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn permutation_moves_factors() {
        // |0⟩⊗|1⟩⊗|2⟩, factor 0 -> site 2, 1 -> 0, 2 -> 1  gives |1 2 0⟩
        let v = Amplitudes::basis(3, &[0, 1, 2]).unwrap();
        let p = SitePermutation::new(vec![2, 0, 1]).unwrap();
        let w = apply_site_permutation(&v, &p).unwrap();
        assert_eq!(w, Amplitudes::basis(3, &[1, 2, 0]).unwrap());
        let back = apply_site_permutation(&w, &p.inverse()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn swap_negates_singlet() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = Amplitudes::new(2, 2, vec![ZERO, c(s), c(-s), ZERO]).unwrap();
        let p = SitePermutation::transposition(2, 0, 1).unwrap();
        let w = apply_site_permutation(&v, &p).unwrap();
        assert!(w.distance(&v.clone().scaled(c(-1.0))) < 1e-15);
    }

    #[test]
    fn permutation_sign() {
        assert_eq!(SitePermutation::identity(4).sign(), 1);
        assert_eq!(SitePermutation::transposition(4, 1, 3).unwrap().sign(), -1);
        assert_eq!(SitePermutation::new(vec![1, 2, 0]).unwrap().sign(), 1);
        assert!(SitePermutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn permutation_enumeration() {
        let perms = permutations_with_sign(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|p| p.1).sum::<i32>(), 0);
        assert_eq!(permutations_with_sign(0).len(), 1);
    }

    #[test]
    fn copy_swap_of_product_exchanges_blocks() {
        let psi = Amplitudes::new(2, 2, vec![c(0.6), ZERO, C64::new(0.0, 0.8), ZERO]).unwrap();
        let phi = bell();
        let v = psi.tensor(&phi).unwrap();
        let w = apply_copy_swap(&v, SubsetMask::full(2)).unwrap();
        assert!(w.distance(&phi.tensor(&psi).unwrap()) < 1e-15);
        let same = apply_copy_swap(&v, SubsetMask::empty(2)).unwrap();
        assert_eq!(same, v);
        assert!(apply_copy_swap(&v, SubsetMask::full(3)).is_err());
    }

    #[test]
    fn pairwise_symmetrizer_on_basis_pair() {
        let v = Amplitudes::basis(2, &[0, 1]).unwrap();
        let w = apply_pairwise_symmetrizer(&v, 0).unwrap();
        let expected = Amplitudes::new(2, 2, vec![ZERO, c(0.5), c(0.5), ZERO]).unwrap();
        assert!(w.distance(&expected) < 1e-15);
        assert!(apply_pairwise_symmetrizer(&v, 1).is_err());
    }

    #[test]
    fn product_symmetrizer_kernel_and_fixed_point() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = Amplitudes::new(2, 2, vec![ZERO, c(s), c(-s), ZERO]).unwrap();
        assert!(apply_product_symmetrizer(&singlet).unwrap().norm() < 1e-15);
        let zz = Amplitudes::basis(2, &[0, 0]).unwrap();
        assert_eq!(apply_product_symmetrizer(&zz).unwrap(), zz);
    }

    #[test]
    fn total_symmetrizer_examples() {
        let zz = Amplitudes::basis(2, &[0, 0]).unwrap();
        let all = SubsetMask::full(2);
        assert!(
            apply_total_symmetrizer(&zz, all, Parity::Antisymmetric)
                .unwrap()
                .norm()
                < 1e-15
        );
        assert_eq!(
            apply_total_symmetrizer(&zz, all, Parity::Symmetric).unwrap(),
            zz
        );
        let zo = Amplitudes::basis(2, &[0, 1]).unwrap();
        let w = apply_total_symmetrizer(&zo, all, Parity::Antisymmetric).unwrap();
        let expected = Amplitudes::new(2, 2, vec![ZERO, c(0.5), c(-0.5), ZERO]).unwrap();
        assert!(w.distance(&expected) < 1e-15);
    }

    fn outer(v: &Amplitudes) -> DensityMatrix {
        let d = v.dim();
        DensityMatrix::from_fn(d, d, |a, b| v.as_slice()[a] * v.as_slice()[b].conj())
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let r1 = DensityMatrix::from_row_slice(
            2,
            2,
            &[c(0.7), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.3)],
        );
        let r2 = DensityMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)]);
        let rho = r1.kronecker(&r2);
        let keep1 = SubsetMask::from_sites(&[0], 2).unwrap();
        assert!((partial_trace(&rho, 2, keep1).unwrap() - &r1).norm() < 1e-15);
        let keep2 = SubsetMask::from_sites(&[1], 2).unwrap();
        assert!((partial_trace(&rho, 2, keep2).unwrap() - &r2).norm() < 1e-15);

        let b = partial_trace(&outer(&bell()), 2, keep1).unwrap();
        assert!((b - DensityMatrix::identity(2, 2).scale(0.5)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_ghz_pair() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut ghz = Amplitudes::zeros(2, 3).unwrap();
        ghz.as_mut_slice()[0] = c(s);
        ghz.as_mut_slice()[7] = c(s);
        let keep = SubsetMask::from_sites(&[0, 1], 3).unwrap();
        let r = partial_trace(&outer(&ghz), 2, keep).unwrap();
        let expected = DensityMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(0.5),
            ZERO,
            ZERO,
            c(0.5),
        ]));
        assert!((r - expected).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_edge_masks() {
        let rho = outer(&bell());
        assert!(matches!(
            partial_trace(&rho, 2, SubsetMask::empty(2)),
            Err(Error::Contract(_))
        ));
        assert_eq!(partial_trace(&rho, 2, SubsetMask::full(2)).unwrap(), rho);
        assert!(partial_trace(&rho, 3, SubsetMask::full(2)).is_err());
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&outer(&bell())) - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::identity(4, 4).scale(0.25);
        assert!((purity(&mixed) - 0.25).abs() < 1e-15);
        // Werner p = 0.8: p² + p(1−p)/2 + (1−p)²/4
        let p: f64 = 0.8;
        let closed = p * p + p * (1.0 - p) / 2.0 + (1.0 - p).powi(2) / 4.0;
        assert!((closed - 0.73).abs() < 1e-12);
        let werner = outer(&bell()).scale(p) + mixed.scale(1.0 - p);
        assert!((purity(&werner) - 0.73).abs() < 1e-12);
        assert!(((&werner * &werner).trace().re - 0.73).abs() < 1e-12);
    }

    #[test]
    fn subset_purity_conventions() {
        let rho = outer(&bell());
        assert!((subset_purity(&rho, 2, SubsetMask::empty(2)).unwrap() - 1.0).abs() < 1e-15);
        assert!((subset_purity(&rho, 2, SubsetMask::full(2)).unwrap() - 1.0).abs() < 1e-15);
        let one = SubsetMask::from_sites(&[1], 2).unwrap();
        assert!((subset_purity(&rho, 2, one).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linear_entropy_of_product_is_exactly_small() {
        let a = Amplitudes::new(2, 1, vec![C64::new(0.6, 0.1), C64::new(0.3, -0.734)]).unwrap();
        let a = a.normalized().unwrap();
        let v = a.tensor(&a).unwrap().tensor(&a).unwrap();
        for bits in 1..7 {
            let m = SubsetMask::new(bits, 3).unwrap();
            assert!(linear_entropy_pure(&v, m).unwrap() < 1e-30);
        }
        let one = SubsetMask::from_sites(&[0], 2).unwrap();
        assert!((linear_entropy_pure(&bell(), one).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mask_helpers() {
        let m = SubsetMask::from_sites(&[0, 2], 3).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.complement().sites().collect::<Vec<_>>(), vec![1]);
        assert!(SubsetMask::new(0b1000, 3).is_err());
        assert_eq!(SubsetMask::all(3).count(), 8);
    }
}
