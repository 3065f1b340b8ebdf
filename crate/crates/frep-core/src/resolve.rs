//! Finite resolutions `0 → P_k ⊕ D_k → ⋯ → P_0 → V → 0` by Schur
//! projectives and `D` summands, with their verification and the
//! dimension and character polynomials they determine.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::eval::{dim_at, image_at, quotient_at, Limits};
use crate::finset::{binomial, enumerate_functions, schur_dim, FinFn, Partition};
use crate::homology::{build_cover, free_cover, h0_at, Cover};
use crate::linalg::{linear_relations, q, QMatrix, Rational, SparseVec, Subspace};
use crate::presentation::Presentation;
use crate::qf::{column_to_vector, epsilon, partial, postcompose, postcompose_fn, postcomposition_matrix, vector_to_column, young_symmetrizer, LinComb, ObjList, QfMat};
use crate::symfun::{elementary, schur_polynomial, MPoly, Poly};

const MAX_DEPTH: usize = 16;

/// One indecomposable summand of a resolution term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand {
    /// `P_λ = ⟨c_λ⟩`.
    Schur(Partition),
    /// `D_k = ⟨∂_{k−1}⟩`, `k ≥ 1`.
    D(usize),
}

impl Summand {
    /// The block of the term's presentation: `c_λ` or `∂_{k−1}`.
    pub fn block(&self) -> LinComb {
        match self {
            Summand::Schur(l) => young_symmetrizer(l),
            Summand::D(k) => partial(k - 1),
        }
    }

    pub fn dim_at(&self, n: usize) -> i64 {
        match self {
            Summand::Schur(l) => schur_dim(l, n) as i64,
            Summand::D(k) => dim_d(*k, n),
        }
    }

    /// Dimension as a polynomial, valid for `n ≥ 1`.
    pub fn dim_poly(&self) -> Poly {
        match self {
            Summand::Schur(l) => Poly::schur_dim(l),
            Summand::D(k) => (0..*k).fold(Poly::zero(), |acc, j| acc.add(&Poly::binomial(j).scale(&koszul_sign(*k, j)))),
        }
    }

    /// Character polynomial in `x_i` = fixed points of `σ^i`, valid for `n ≥ 1`.
    pub fn char_poly(&self) -> MPoly {
        match self {
            Summand::Schur(l) => schur_polynomial(l),
            Summand::D(k) => {
                let e = elementary(k - 1);
                (0..*k).fold(MPoly::zero(), |acc, j| acc.add(&e[j].scale(&koszul_sign(*k, j))))
            }
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Schur(l) => write!(f, "P{l}"),
            Summand::D(k) => write!(f, "D{k}"),
        }
    }
}

/// `(−1)^{k−1−j}`, the sign of `Λ^j` in the Koszul truncation of `D_k`.
fn koszul_sign(k: usize, j: usize) -> Rational {
    if (k - 1 - j).is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

/// `dim D_k[n] = Σ_{j<k} (−1)^{k−1−j} C(n,j) + (−1)^k [n = 0]`, with `dim D_0[n] = [n = 0]`.
pub fn dim_d(k: usize, n: usize) -> i64 {
    let mut total: i64 = 0;
    for j in 0..k {
        let sign = if (k - 1 - j).is_multiple_of(2) { 1 } else { -1 };
        total += sign * binomial(n, j) as i64;
    }
    if n == 0 {
        total += if k.is_multiple_of(2) { 1 } else { -1 };
    }
    total
}

/// `dim C_λ[n] = f_λ · C(n, |λ|)`.
pub fn dim_c(lambda: &Partition, n: usize) -> u64 {
    crate::finset::specht_dim(lambda) * binomial(n, lambda.size())
}

/// A term as multisets of summands: Schur partitions and `D` indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ResolutionTerm {
    pub schur_parts: Vec<Partition>,
    pub d_parts: Vec<usize>,
}

/// A term: a direct sum of summands, presented as `⟨diag(blocks)⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub summands: Vec<Summand>,
}

impl Term {
    pub fn new(summands: Vec<Summand>) -> Self {
        Term { summands }
    }

    /// `diag(c_λ, …, ∂_{k−1}, …)`; its source is the term's object.
    pub fn block_matrix(&self) -> QfMat {
        QfMat::diag(self.summands.iter().map(Summand::block).collect())
    }

    pub fn object(&self) -> ObjList {
        self.block_matrix().src().clone()
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::imrep(self.to_string(), self.block_matrix())
    }

    pub fn dim_at(&self, n: usize) -> i64 {
        self.summands.iter().map(|s| s.dim_at(n)).sum()
    }

    pub fn shape(&self) -> ResolutionTerm {
        let mut t = ResolutionTerm::default();
        for s in &self.summands {
            match s {
                Summand::Schur(l) => t.schur_parts.push(l.clone()),
                Summand::D(k) => t.d_parts.push(*k),
            }
        }
        t.schur_parts.sort();
        t.d_parts.sort();
        t
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A resolution of `target`. Elements of term `i` at `[n]` live in
/// `ℚ𝓕(X_i, [n])`; the boundary out of term `i+1` is `v ↦ boundaries[i]·v`
/// and the augmentation is `v ↦ augmentation·v`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: Presentation,
    pub terms: Vec<Term>,
    /// `boundaries[i]: X_i → X_{i+1}`.
    pub boundaries: Vec<QfMat>,
    /// `X_V → X_0`.
    pub augmentation: QfMat,
    /// Number of leading terms whose cover was not minimal in its top degree.
    pub free_prefix: usize,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn shapes(&self) -> Vec<ResolutionTerm> {
        self.terms.iter().map(Term::shape).collect()
    }
}

struct Chain {
    terms: Vec<Term>,
    boundaries: Vec<QfMat>,
    augmentation: QfMat,
    free_prefix: usize,
}

/// Resolves `p`. When `f` is an identity the first step is the free cover
/// of `⟨Y⟩`; every later step uses the minimal cover of [`build_cover`].
pub fn resolve(p: &Presentation) -> Result<Resolution> {
    let c = chain(p, true, 0)?;
    Ok(Resolution { target: p.clone(), terms: c.terms, boundaries: c.boundaries, augmentation: c.augmentation, free_prefix: c.free_prefix })
}

fn chain(p: &Presentation, allow_free: bool, depth: usize) -> Result<Chain> {
    if depth > MAX_DEPTH {
        return Err(Error::Internal(format!("resolution deeper than {MAX_DEPTH} steps")));
    }
    let free = allow_free && p.f.is_identity();
    let cover = if free { free_cover(p.y())? } else { build_cover(p)? };
    if cover.is_empty() {
        return Ok(Chain { terms: Vec::new(), boundaries: Vec::new(), augmentation: QfMat::zero(p.x().clone(), ObjList::zero()), free_prefix: 0 });
    }
    let d = cover.degree();
    let minimal = !free || cover.top_h0() == h0_at(p, d)?.dim;
    let scan_top = if minimal { d + 1 } else { d.max(p.z().max_size()) };
    let kernel = kernel_imrep(&cover, p, minimal, scan_top)?;
    let head = Term::new(cover.summands.iter().cloned().map(Summand::Schur).collect());
    let mut out = Chain { terms: vec![head], boundaries: Vec::new(), augmentation: cover.map.clone(), free_prefix: 0 };
    if kernel.generators.is_empty() {
        return Ok(out);
    }
    if !minimal {
        let sub = chain(&kernel.presentation, false, depth + 1)?;
        out.terms.extend(sub.terms);
        out.boundaries.push(sub.augmentation);
        out.boundaries.extend(sub.boundaries);
        out.free_prefix = 1 + sub.free_prefix;
        return Ok(out);
    }
    let split = split_d_summands(&kernel, cover.object(), d)?;
    let sub = chain(&split.remainder, false, depth + 1)?;
    let mut first = split.summands.clone();
    if let Some(t) = sub.terms.first() {
        first.extend(t.summands.iter().cloned());
    }
    out.terms.push(Term::new(first));
    out.boundaries.push(split.map.hstack(&sub.augmentation)?);
    if sub.terms.len() >= 2 {
        let correction = splice_correction(&split, cover.object(), &sub)?;
        out.boundaries.push(correction.vstack(&sub.boundaries[0])?);
        out.boundaries.extend(sub.boundaries[1..].iter().cloned());
    }
    out.terms.extend(sub.terms.into_iter().skip(1));
    Ok(out)
}

/// Generators of the kernel of a cover, and `K = ⟨f_K⟩` built from them.
#[derive(Clone, Debug)]
pub struct Kernel {
    /// `(degree, vector in ℚ𝓕(X_C, [degree]))`, by increasing degree.
    pub generators: Vec<(usize, SparseVec)>,
    pub presentation: Presentation,
}

/// `K[l] = {c ∈ C[l] : cover(c) ∈ ⟨fg⟩[l]}`.
fn kernel_at(cover: &Cover, p: &Presentation, l: usize, limits: &Limits) -> Result<Subspace> {
    let xc = cover.object();
    limits.check(xc.dim_at(l))?;
    let target = quotient_at(p, l, limits)?;
    let basis = image_at(&cover.presentation.f, l).canonical_basis();
    let images: Vec<SparseVec> = basis.iter().map(|t| target.denominator.reduce(&cover.map.apply(l, t))).collect();
    let relations = linear_relations(p.x().dim_at(l), &images);
    Ok(Subspace::from_vectors(
        xc.dim_at(l),
        relations.iter().map(|a| {
            a.iter().zip(&basis).filter(|(c, _)| !c.is_zero()).fold(SparseVec::new(), |acc, (c, t)| acc.add_scaled(t, c))
        }),
    ))
}

/// `⟨gens⟩[n]`.
fn generated_at(x: &ObjList, gens: &[(usize, SparseVec)], n: usize) -> Subspace {
    let mut span = Subspace::new(x.dim_at(n));
    for (m, v) in gens {
        for phi in enumerate_functions(*m, n) {
            span.insert(&postcompose_fn(x, v, *m, &phi));
        }
    }
    span
}

/// Scans degrees `0..=scan_top` for kernel generators. When the cover is
/// minimal at its degree `d`, candidates in degrees `d` and `d+1` are taken
/// from `K[l]·ε_l` only; the final rank check confirms these suffice.
pub fn kernel_imrep(cover: &Cover, p: &Presentation, minimal: bool, scan_top: usize) -> Result<Kernel> {
    let limits = Limits::default();
    let xc = cover.object();
    let d = cover.degree();
    let mut gens: Vec<(usize, SparseVec)> = Vec::new();
    for l in 0..=scan_top {
        let kl = kernel_at(cover, p, l, &limits)?;
        let mut span = generated_at(xc, &gens, l);
        let eps = epsilon(l);
        for v in kl.canonical_basis() {
            let v = if minimal && l >= d { postcompose(xc, &v, l, &eps) } else { v };
            if span.contains(&v) {
                continue;
            }
            for phi in enumerate_functions(l, l) {
                span.insert(&postcompose_fn(xc, &v, l, &phi));
            }
            gens.push((l, v));
        }
    }
    for n in 0..=scan_top + 1 {
        let expected = kernel_at(cover, p, n, &limits)?;
        let got = generated_at(xc, &gens, n);
        if got.dim() != expected.dim() {
            return Err(Error::Internal(format!("kernel generators span {} of {} dimensions at [{n}]", got.dim(), expected.dim())));
        }
    }
    let cols = ObjList::new(gens.iter().map(|(l, _)| *l).collect());
    let mut f = QfMat::zero(xc.clone(), cols);
    for (j, (l, v)) in gens.iter().enumerate() {
        for (i, e) in vector_to_column(xc, *l, v).into_iter().enumerate() {
            f.set(i, j, e);
        }
    }
    let presentation = Presentation::imrep(format!("kernel of {}", cover.presentation.name), f);
    Ok(Kernel { generators: gens, presentation })
}

/// The `D` part split off a kernel: one `D_l` per generator in degree `l ≥ d`.
#[derive(Clone, Debug)]
pub struct DSplit {
    pub summands: Vec<Summand>,
    /// `X_C → ⊕[l−1]`; the `D_l` summand maps by `v ↦ map·v`.
    pub map: QfMat,
    /// `X_C → ⊕[l]`; column `j` is the generator `u_j = map_j·∂_{l−1}`.
    pub generators: QfMat,
    /// `V′ = K / D-part`.
    pub remainder: Presentation,
}

impl DSplit {
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for s in &self.summands {
            if let Summand::D(k) = s {
                *m.entry(*k).or_insert(0) += 1;
            }
        }
        m
    }
}

/// Splits the `ε`-generators of degree `≥ d` off `K` as `D` summands.
pub fn split_d_summands(kernel: &Kernel, xc: &ObjList, d: usize) -> Result<DSplit> {
    let gens = &kernel.generators;
    let mut order: Vec<usize> = (0..gens.len()).filter(|&j| gens[j].0 >= d).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(gens[j].0));
    let mut summands = Vec::new();
    let mut map = QfMat::zero(xc.clone(), ObjList::new(order.iter().map(|&j| gens[j].0.saturating_sub(1)).collect()));
    for (col, &j) in order.iter().enumerate() {
        let (l, u) = &gens[j];
        if *l == 0 {
            return Err(Error::Internal("an ε-generator in degree 0".into()));
        }
        let dl = partial(l - 1);
        for (i, ui) in vector_to_column(xc, *l, u).into_iter().enumerate() {
            let a = xc.sizes()[i];
            let b = postcomposition_matrix(&dl, a)
                .solve(&ui.to_sparse().to_dense(crate::finset::pow(*l, a)))
                .ok_or_else(|| Error::Internal(format!("generator in degree {l} does not factor through ∂_{}", l - 1)))?;
            map.set(i, col, LinComb::from_sparse(a, l - 1, &SparseVec::from_dense(&b)));
        }
        summands.push(Summand::D(*l));
    }
    let generators = kernel.presentation.f.select_columns(&order);
    let dims: Vec<usize> = order.iter().map(|&j| gens[j].0).collect();
    for n in d..=d + 2 {
        let expected: i64 = dims.iter().map(|&l| dim_d(l, n)).sum();
        let got = image_at(&generators, n).dim() as i64;
        if got != expected {
            return Err(Error::Internal(format!("D part is not injective at [{n}]: image {got}, expected {expected}")));
        }
    }
    let l_obj = kernel.presentation.y().clone();
    let mut g = QfMat::zero(l_obj, ObjList::new(dims));
    for (col, &j) in order.iter().enumerate() {
        g.set(j, col, LinComb::identity(gens[j].0));
    }
    let remainder = Presentation::new(format!("{} mod D", kernel.presentation.name), kernel.presentation.f.clone(), g)?;
    Ok(DSplit { summands, map, generators, remainder })
}

/// Rows of the second boundary over the `D` part: `−diag(∂)·E` with
/// `U·E·F = G′·B′·F`, where `F` is the block matrix of the remainder's
/// second term.
fn splice_correction(split: &DSplit, xc: &ObjList, sub: &Chain) -> Result<QfMat> {
    let next = &sub.terms[1];
    let fb = next.block_matrix();
    let target = sub.augmentation.mul(&sub.boundaries[0])?.mul(&fb)?;
    let u = &split.generators;
    let l_obj = u.dst().clone();
    let mut e = QfMat::zero(l_obj.clone(), fb.src().clone());
    for (r, s) in next.summands.iter().enumerate() {
        let phi = s.block();
        let (t, out) = (phi.dom(), phi.cod());
        let mut cols = Vec::new();
        let mut slots = Vec::new();
        for (j, &l) in l_obj.sizes().iter().enumerate() {
            let uj = column_to_vector(xc, l, &(0..xc.len()).map(|i| u.get(i, j).clone()).collect::<Vec<_>>());
            for h in enumerate_functions(l, t) {
                cols.push(postcompose(xc, &uj, l, &LinComb::from_fn(h.clone()).compose(&phi)?));
                slots.push((j, h));
            }
        }
        let rhs = column_to_vector(xc, out, &(0..xc.len()).map(|i| target.get(i, r).clone()).collect::<Vec<_>>());
        let sol = QMatrix::from_sparse_columns(xc.dim_at(out), &cols)
            .solve(&rhs.to_dense(xc.dim_at(out)))
            .ok_or_else(|| Error::Internal("splice correction has no solution".into()))?;
        let mut entries: Vec<Vec<(FinFn, Rational)>> = vec![Vec::new(); l_obj.len()];
        for ((j, h), c) in slots.into_iter().zip(sol) {
            if !c.is_zero() {
                entries[j].push((h, c));
            }
        }
        for (j, terms) in entries.into_iter().enumerate() {
            e.set(j, r, LinComb::from_terms(l_obj.sizes()[j], t, terms)?);
        }
    }
    let partials = QfMat::diag(split.summands.iter().map(Summand::block).collect());
    Ok(partials.mul(&e)?.scale(&q(-1)))
}

/// Per-`n` data gathered by [`verify_resolution`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyRow {
    pub n: usize,
    pub target_dim: usize,
    pub term_dims: Vec<usize>,
    /// Rank of the augmentation, then of each boundary.
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub n_max: usize,
    pub rows: Vec<VerifyRow>,
}

/// Checks the resolution numerically at every `n ≤ n_max`.
pub fn verify_resolution(r: &Resolution, n_max: usize) -> Result<VerifyReport> {
    let limits = Limits::default();
    let rows: Vec<Result<VerifyRow>> = (0..=n_max).into_par_iter().map(|n| verify_at(r, n, &limits)).collect();
    Ok(VerifyReport { n_max, rows: rows.into_iter().collect::<Result<_>>()? })
}

fn verify_at(r: &Resolution, n: usize, limits: &Limits) -> Result<VerifyRow> {
    let fail = |msg: String| Error::Verification(format!("at [{n}]: {msg}"));
    let target = quotient_at(&r.target, n, limits)?;
    let blocks: Vec<QfMat> = r.terms.iter().map(Term::block_matrix).collect();
    let mut spaces = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        limits.check_map(b, n)?;
        let s = image_at(b, n);
        let expected = r.terms[i].dim_at(n);
        if s.dim() as i64 != expected {
            return Err(fail(format!("term {i} has dimension {}, expected {expected}", s.dim())));
        }
        spaces.push(s);
    }
    if r.boundaries.len() + 1 != r.terms.len().max(1) {
        return Err(fail(format!("{} boundaries for {} terms", r.boundaries.len(), r.terms.len())));
    }
    let mut ranks = Vec::with_capacity(r.terms.len());
    if let Some(t0) = spaces.first() {
        let mut span = target.denominator.clone();
        for t in t0.basis_ref() {
            let w = r.augmentation.apply(n, t);
            if !target.numerator.contains(&w) {
                return Err(fail("augmentation leaves the numerator".into()));
            }
            span.insert(&w);
        }
        ranks.push(span.dim() - target.denominator.dim());
    } else {
        ranks.push(0);
    }
    for (i, b) in r.boundaries.iter().enumerate() {
        let mut image = Subspace::new(b.src().dim_at(n));
        for t in spaces[i + 1].basis_ref() {
            let w = b.apply(n, t);
            if !spaces[i].contains(&w) {
                return Err(fail(format!("boundary {} leaves term {i}", i + 1)));
            }
            let back = if i == 0 { r.augmentation.apply(n, &w) } else { r.boundaries[i - 1].apply(n, &w) };
            let zero = if i == 0 { target.denominator.contains(&back) } else { back.is_zero() };
            if !zero {
                return Err(fail(format!("boundary {} composed with the map below it is nonzero", i + 1)));
            }
            image.insert(&w);
        }
        ranks.push(image.dim());
    }
    if ranks[0] != target.dim() {
        return Err(fail(format!("augmentation has rank {}, target dimension is {}", ranks[0], target.dim())));
    }
    let term_dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
    for (i, &dim) in term_dims.iter().enumerate() {
        let outgoing = ranks[i];
        let incoming = ranks.get(i + 1).copied().unwrap_or(0);
        if dim != outgoing + incoming {
            return Err(fail(format!("not exact at term {i}: dimension {dim}, ranks {outgoing} out and {incoming} in")));
        }
    }
    let euler: i64 = term_dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
    if euler != target.dim() as i64 {
        return Err(fail(format!("Euler characteristic {euler} differs from dimension {}", target.dim())));
    }
    Ok(VerifyRow { n, target_dim: target.dim(), term_dims, ranks })
}

/// A polynomial for `dim V[n]` on `n ≥ 1`, plus the value at `n = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimPoly {
    pub poly: Poly,
    pub at_zero: usize,
}

impl DimPoly {
    pub fn eval(&self, n: usize) -> Rational {
        if n == 0 {
            q(self.at_zero as i64)
        } else {
            self.poly.eval(&q(n as i64))
        }
    }
}

fn alternating<T>(r: &Resolution, zero: T, per: impl Fn(&Summand) -> T, add: impl Fn(&T, &T) -> T, neg: impl Fn(&T) -> T) -> T {
    let mut total = zero;
    for (i, t) in r.terms.iter().enumerate() {
        for s in &t.summands {
            let v = per(s);
            total = if i % 2 == 0 { add(&total, &v) } else { add(&total, &neg(&v)) };
        }
    }
    total
}

pub fn dim_poly(r: &Resolution) -> Result<DimPoly> {
    let poly = alternating(r, Poly::zero(), Summand::dim_poly, Poly::add, |p| p.scale(&q(-1)));
    Ok(DimPoly { poly, at_zero: dim_at(&r.target, 0)? })
}

/// Character polynomial in `x_1, x_2, …`, valid for `n ≥ 1`.
pub fn char_poly(r: &Resolution) -> MPoly {
    alternating(r, MPoly::zero(), Summand::char_poly, MPoly::add, |p| p.scale(&q(-1)))
}

/// A class in the basis `{[P_λ]} ∪ {[D_0]}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KClass {
    pub schur: BTreeMap<Partition, i64>,
    pub d0: i64,
}

impl KClass {
    fn add(&mut self, s: &Summand, c: i64) {
        match s {
            Summand::Schur(l) => *self.schur.entry(l.clone()).or_insert(0) += c,
            Summand::D(k) => {
                // 0 → D_k → Λ^{k−1} → ⋯ → Λ^0 → D_0 → 0
                for j in 0..*k {
                    let sign = if (k - 1 - j) % 2 == 0 { 1 } else { -1 };
                    *self.schur.entry(Partition::column(j)).or_insert(0) += sign * c;
                }
                self.d0 += if k % 2 == 0 { c } else { -c };
            }
        }
        self.schur.retain(|_, v| *v != 0);
    }

    /// Dimension of the class at `[n]`.
    pub fn dim_at(&self, n: usize) -> i64 {
        let p: i64 = self.schur.iter().map(|(l, c)| c * schur_dim(l, n) as i64).sum();
        p + if n == 0 { self.d0 } else { 0 }
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.schur.iter().map(|(l, c)| format!("{c}[P{l}]")).collect();
        if self.d0 != 0 {
            parts.push(format!("{}[D0]", self.d0));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

pub fn k_theory_vector(r: &Resolution) -> KClass {
    let mut k = KClass::default();
    for (i, t) in r.terms.iter().enumerate() {
        for s in &t.summands {
            k.add(s, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    k
}

/// The shape invariant, checked on the terms after the free prefix: with
/// `k` the degree of the first of them, term `i` has Schur parts of size
/// `≤ k − i` and `D` indices in `{k−i+1, k−i+2}`, and term 0 has no `D` part.
pub fn check_shape(r: &Resolution) -> Result<()> {
    let tail = &r.terms[r.free_prefix.min(r.terms.len())..];
    let Some(first) = tail.first() else { return Ok(()) };
    let k = first.summands.iter().map(|s| if let Summand::Schur(l) = s { l.size() } else { 0 }).max().unwrap_or(0) as i64;
    for (i, t) in tail.iter().enumerate() {
        let i64_i = i as i64;
        for s in &t.summands {
            let ok = match s {
                Summand::Schur(l) => l.size() as i64 <= k - i64_i,
                Summand::D(d) => i > 0 && (*d as i64 == k - i64_i + 1 || *d as i64 == k - i64_i + 2),
            };
            if !ok {
                return Err(Error::Verification(format!("term {} summand {s} breaks the shape for degree {k}", i + r.free_prefix)));
            }
        }
    }
    Ok(())
}

fn qfmat_json(m: &QfMat) -> Value {
    Value::Array(
        (0..m.src().len()).map(|i| Value::Array((0..m.dst().len()).map(|j| Value::String(m.get(i, j).to_string())).collect())).collect(),
    )
}

/// The resolution as JSON; `dim` and `chars` come from [`dim_poly`] and [`char_poly`].
pub fn to_json(r: &Resolution, dim: &DimPoly, chars: &MPoly) -> Value {
    let terms: Vec<Value> = r
        .terms
        .iter()
        .map(|t| {
            let s = t.shape();
            json!({
                "summands": t.summands.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "schur": s.schur_parts.iter().map(Partition::compact).collect::<Vec<_>>(),
                "d": s.d_parts,
            })
        })
        .collect();
    json!({
        "target": r.target.name,
        "terms": terms,
        "boundaries": r.boundaries.iter().map(qfmat_json).collect::<Vec<_>>(),
        "augmentation": qfmat_json(&r.augmentation),
        "dim_poly": {
            "coeffs": dim.poly.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "at_zero": dim.at_zero,
            "text": dim.poly.to_string(),
        },
        "char_poly": chars.to_string(),
        "k_theory": k_theory_vector(r).to_string(),
    })
}
