//! Zeroth homology `H₀V[k]`, its isotypic pieces, and the Schur-projective
//! cover built from them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::eval::{quotient_at, Limits};
use crate::finset::{enumerate_functions, partitions_of, pow, specht_dim, FinFn, Partition};
use crate::linalg::{SparseVec, Subspace};
use crate::presentation::Presentation;
use crate::qf::{postcompose, postcompose_fn, vector_to_column, young_symmetrizer, ObjList, QfMat};

#[derive(Clone, Debug)]
pub struct HomologyData {
    pub degree: usize,
    pub dim: usize,
    /// Numerator vectors whose classes form a basis of `H₀V[k]`.
    pub representatives: Vec<SparseVec>,
    pub multiplicities: BTreeMap<Partition, usize>,
    /// For each `λ`, vectors `v` with `v·c_λ = v`, independent modulo the relations.
    pub isotypic_generators: BTreeMap<Partition, Vec<SparseVec>>,
    /// Denominator plus skeleton at `[k]`.
    pub relations: Subspace,
}

impl HomologyData {
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }
}

/// Vectors `f·(e_j ⊗ h)` for non-surjective `h: [y_j] → [k]`: the part of
/// `V[k]` that factors through a smaller set.
fn skeleton_vectors(f: &QfMat, k: usize) -> impl Iterator<Item = SparseVec> + '_ {
    let src_off = f.src().offsets_at(k);
    let mut scratch = Vec::new();
    let ys = f.dst().sizes();
    (0..ys.len()).flat_map(move |j| (0..pow(k, ys[j])).map(move |h| (j, h))).filter_map(move |(j, h)| {
        let y = ys[j];
        if FinFn::from_index(h, y, k).is_surjective() {
            return None;
        }
        Some(f.basis_image(k, j, h, &src_off, &mut scratch))
    })
}

pub fn h0_at(p: &Presentation, k: usize) -> Result<HomologyData> {
    h0_at_with(p, k, &Limits::default())
}

pub fn h0_at_with(p: &Presentation, k: usize, limits: &Limits) -> Result<HomologyData> {
    let q = quotient_at(p, k, limits)?;
    let mut relations = q.denominator.clone();
    if k > 0 {
        for v in skeleton_vectors(&p.f, k) {
            if relations.dim() == q.numerator.dim() {
                break;
            }
            relations.insert(&v);
        }
    }
    let representatives = complement(&q.numerator, &relations);
    let dim = representatives.len();

    let (multiplicities, isotypic_generators) = isotypic_split(p.x(), k, &representatives, &relations)?;
    Ok(HomologyData { degree: k, dim, representatives, multiplicities, isotypic_generators, relations })
}

/// Splits the classes of `reps` modulo `relations` by isotype: for each `λ`,
/// a maximal family of vectors `r·c_λ` independent modulo `relations`.
#[allow(clippy::type_complexity)]
fn isotypic_split(
    x: &ObjList,
    k: usize,
    reps: &[SparseVec],
    relations: &Subspace,
) -> Result<(BTreeMap<Partition, usize>, BTreeMap<Partition, Vec<SparseVec>>)> {
    let mut multiplicities = BTreeMap::new();
    let mut generators = BTreeMap::new();
    if reps.is_empty() {
        return Ok((multiplicities, generators));
    }
    let mut total = 0u64;
    for lam in partitions_of(k) {
        let c = young_symmetrizer(&lam);
        let mut span = relations.clone();
        let mut gens = Vec::new();
        for r in reps {
            let v = postcompose(x, r, k, &c);
            if span.insert(&v).is_some() {
                gens.push(v);
            }
        }
        total += gens.len() as u64 * specht_dim(&lam);
        if !gens.is_empty() {
            multiplicities.insert(lam.clone(), gens.len());
            generators.insert(lam, gens);
        }
    }
    if total != reps.len() as u64 {
        return Err(Error::Internal(format!("isotypic dimensions sum to {total}, expected {} at degree {k}", reps.len())));
    }
    Ok((multiplicities, generators))
}

/// Numerator basis vectors that are independent modulo `relations`.
fn complement(numerator: &Subspace, relations: &Subspace) -> Vec<SparseVec> {
    let mut span = relations.clone();
    numerator.canonical_basis().into_iter().filter(|v| span.insert(v).is_some()).collect()
}

pub fn isotypic_multiplicities(h: &HomologyData) -> BTreeMap<Partition, usize> {
    h.multiplicities.clone()
}

/// Generators `v = v·c_λ` splitting the homology map, one per copy of `Sp_λ`.
pub fn equivariant_section(_p: &Presentation, h: &HomologyData) -> BTreeMap<Partition, Vec<SparseVec>> {
    h.isotypic_generators.clone()
}

/// `H₀V[k]` dimensions for `k = 0..=up_to`.
pub fn h0_dims(p: &Presentation, up_to: usize) -> Result<Vec<usize>> {
    (0..=up_to).map(|k| Ok(h0_at(p, k)?.dim)).collect()
}

/// A surjection `⊕ P_λ → V` built from isotypic generators, chosen from the
/// top degree down.
#[derive(Clone, Debug)]
pub struct Cover {
    /// `⟨diag(c_λ)⟩` on the cover object.
    pub presentation: Presentation,
    /// `X → C`; the cover sends `t` to `map·t`.
    pub map: QfMat,
    /// The partition behind each component of the cover object.
    pub summands: Vec<Partition>,
    /// `dim H₀V[k]` for `k = 0..=degree_bound`.
    pub target_h0: Vec<usize>,
}

impl Cover {
    pub fn object(&self) -> &ObjList {
        self.presentation.x()
    }

    pub fn degree(&self) -> usize {
        self.summands.iter().map(Partition::size).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// `dim H₀C[d]` at the cover's own degree; lower-degree summands contribute nothing there.
    pub fn top_h0(&self) -> usize {
        let d = self.degree();
        self.summands.iter().filter(|l| l.size() == d).map(|l| specht_dim(l) as usize).sum()
    }

    /// Whether `H₀C[d] → H₀V[d]` is an isomorphism at the top degree `d`.
    pub fn is_top_isomorphism(&self) -> bool {
        self.is_empty() || self.target_h0.get(self.degree()).copied() == Some(self.top_h0())
    }
}

/// At each degree `k`, from `degree_bound` down to 0, generators are taken
/// from `V[k]` modulo the denominator, the skeleton, and everything the
/// generators already chosen in higher degrees reach at `[k]`. At the top
/// degree of `V` this is exactly `H₀V`, so the cover is an `H₀`-isomorphism there.
pub fn build_cover(p: &Presentation) -> Result<Cover> {
    let top = p.degree_bound();
    let x = p.x();
    let limits = Limits::default();
    let mut chosen: Vec<(usize, Partition, SparseVec)> = Vec::new();
    let mut target_h0 = vec![0; top + 1];
    for k in (0..=top).rev() {
        let h = h0_at_with(p, k, &limits)?;
        target_h0[k] = h.dim;
        let mut relations = h.relations.clone();
        for (m, _, v) in &chosen {
            for psi in enumerate_functions(*m, k).into_iter().filter(FinFn::is_surjective) {
                relations.insert(&postcompose_fn(x, v, *m, &psi));
            }
        }
        let mut span = relations.clone();
        let reps: Vec<SparseVec> = generator_candidates(p, k).filter(|v| span.insert(v).is_some()).collect();
        let (_, gens) = isotypic_split(x, k, &reps, &relations)?;
        for (lam, vs) in gens {
            chosen.extend(vs.into_iter().map(|v| (k, lam.clone(), v)));
        }
    }
    let cover = assemble_cover(p, chosen, target_h0);
    check_surjective(p, &cover, top + 2)?;
    if !cover.is_top_isomorphism() {
        return Err(Error::Internal("cover is not an H₀-isomorphism in its top degree".into()));
    }
    Ok(cover)
}

/// `f` applied to every surjection `[y_j] → [k]`; modulo the skeleton these span `V[k]`.
fn generator_candidates(p: &Presentation, k: usize) -> impl Iterator<Item = SparseVec> + '_ {
    let src_off = p.x().offsets_at(k);
    let mut scratch = Vec::new();
    p.y().sizes().iter().enumerate().flat_map(move |(j, &y)| {
        enumerate_functions(y, k).into_iter().filter(FinFn::is_surjective).map(move |phi| (j, phi))
    }).map(move |(j, phi)| p.f.basis_image(k, j, phi.index(), &src_off, &mut scratch))
}

/// The free cover of `⟨Y⟩`, one Schur projective per isotypic copy.
pub fn free_cover(y: &ObjList) -> Result<Cover> {
    build_cover(&Presentation::imrep("free", QfMat::identity(y)))
}

fn assemble_cover(p: &Presentation, chosen: Vec<(usize, Partition, SparseVec)>, target_h0: Vec<usize>) -> Cover {
    let x = p.x();
    let c = ObjList::new(chosen.iter().map(|(k, _, _)| *k).collect());
    let mut map = QfMat::zero(x.clone(), c);
    let mut summands = Vec::with_capacity(chosen.len());
    for (j, (k, lam, v)) in chosen.into_iter().enumerate() {
        for (i, e) in vector_to_column(x, k, &v).into_iter().enumerate() {
            map.set(i, j, e);
        }
        summands.push(lam);
    }
    let f = QfMat::diag(summands.iter().map(young_symmetrizer).collect());
    let presentation = Presentation::imrep(format!("cover of {}", p.name), f);
    Cover { presentation, map, summands, target_h0 }
}

/// Asserts `map·C[n] + D[n] = N[n]` for `n ≤ up_to`.
pub(crate) fn check_surjective(p: &Presentation, cover: &Cover, up_to: usize) -> Result<()> {
    let composite = cover.map.mul(&cover.presentation.f)?;
    let limits = Limits::default();
    for n in 0..=up_to {
        let q = quotient_at(p, n, &limits)?;
        let mut span = q.denominator.clone();
        for v in composite.columns_at(n) {
            if !q.numerator.contains(&v) {
                return Err(Error::Internal(format!("cover lands outside the numerator at [{n}]")));
            }
            span.insert(&v);
        }
        if span.dim() != q.numerator.dim() {
            return Err(Error::Internal(format!(
                "cover is not surjective at [{n}]: image has dimension {} of {}",
                span.dim() - q.denominator.dim(),
                q.dim()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{builtin_presentation, Builtin};
    use crate::qf::LinComb;

    fn i_fixture() -> Presentation {
        let g = LinComb::parse("11 + 22 + 33 - 3*12 + 3*13 - 3*23", 2, 3).unwrap();
        Presentation::imrep("I", QfMat::diag(vec![g]))
    }

    fn lc(s: &str, d: usize, c: usize) -> SparseVec {
        LinComb::parse(s, d, c).unwrap().to_sparse()
    }

    #[test]
    fn i_degree_two() {
        let h = h0_at(&i_fixture(), 2).unwrap();
        assert_eq!(h.dim, 2);
        let mut a = h.relations.clone();
        for v in &h.representatives {
            a.insert(v);
        }
        let mut b = h.relations.clone();
        b.insert(&lc("11 - 22", 2, 2));
        b.insert(&lc("12 + 21 - 2*22", 2, 2));
        assert_eq!(a.canonical_basis(), b.canonical_basis());
        let m = isotypic_multiplicities(&h);
        assert_eq!(m.get(&Partition::row(2)), Some(&1));
        assert_eq!(m.get(&Partition::column(2)), Some(&1));
        let eps = &h.isotypic_generators[&Partition::column(2)][0];
        assert!(eps.is_multiple_of(&lc("11 - 22", 2, 2)));
        let t = &h.isotypic_generators[&Partition::row(2)][0];
        assert!(t.is_multiple_of(&lc("-11 + 12 + 21 - 22", 2, 2)));
    }

    #[test]
    fn i_degree_three() {
        let h = h0_at(&i_fixture(), 3).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(isotypic_multiplicities(&h), BTreeMap::from([(Partition::column(3), 1)]));
        let mut with = h.relations.clone();
        with.insert(&h.representatives[0]);
        assert!(with.contains(&lc("12 - 13 - 21 + 23 + 31 - 32", 2, 3)));
        assert!(!h.relations.contains(&lc("12 - 13 - 21 + 23 + 31 - 32", 2, 3)));
        for k in [0, 1, 4] {
            assert_eq!(h0_at(&i_fixture(), k).unwrap().dim, 0, "k = {k}");
        }
    }

    #[test]
    fn regular_representation() {
        for k in 0..=3 {
            let h = h0_at(&builtin_presentation(&Builtin::Tensor(k)), k).unwrap();
            assert_eq!(h.dim as u64, crate::finset::factorial(k));
            for lam in partitions_of(k) {
                assert_eq!(h.multiplicities[&lam] as u64, specht_dim(&lam));
            }
        }
    }

    #[test]
    fn schur_projective_homology_vanishes_above() {
        for k in 0..=3 {
            for lam in partitions_of(k) {
                let p = builtin_presentation(&Builtin::Schur(lam.clone()));
                assert_eq!(h0_at(&p, k).unwrap().dim as u64, specht_dim(&lam));
                for l in k + 1..=k + 2 {
                    assert_eq!(h0_at(&p, l).unwrap().dim, 0, "{lam} at {l}");
                }
            }
        }
    }

    #[test]
    fn cover_of_schur_projective_is_itself() {
        let lam = Partition::new(vec![2, 1]).unwrap();
        let c = build_cover(&builtin_presentation(&Builtin::Schur(lam.clone()))).unwrap();
        assert_eq!(c.summands, vec![lam]);
    }

    #[test]
    fn below_top_degree_homology_can_survive() {
        // ⌊11⌋ ∈ P_(2)[1] is not reached from [0]
        let p = builtin_presentation(&Builtin::Schur(Partition::row(2)));
        assert_eq!(h0_at(&p, 1).unwrap().dim, 1);
    }

    #[test]
    fn covers_of_free_objects() {
        let c = build_cover(&builtin_presentation(&Builtin::Tensor(3))).unwrap();
        let mut expect = Vec::new();
        for lam in partitions_of(3) {
            for _ in 0..specht_dim(&lam) {
                expect.push(lam.clone());
            }
        }
        assert_eq!(c.summands, expect);
        let f = free_cover(&ObjList::new(vec![1, 2])).unwrap();
        assert_eq!(f.summands, vec![Partition::column(2), Partition::row(2), Partition::row(1)]);
    }

    #[test]
    fn intro_cover_is_smaller_than_free() {
        let y = ObjList::single(2);
        let g = QfMat::diag(vec![LinComb::parse("11 + 22 + 33 - 3*12 + 3*13 - 3*23", 2, 3).unwrap()]);
        let p = Presentation::quotient_of_free("V", g);
        let c = build_cover(&p).unwrap();
        assert_eq!(c.summands, vec![Partition::column(2), Partition::row(1)]);
        assert!(c.is_top_isomorphism());
        let free = free_cover(&y).unwrap();
        assert_eq!(free.summands, vec![Partition::column(2), Partition::row(2)]);
    }

    #[test]
    fn empty_cover_of_zero() {
        let zero = Presentation::imrep("zero", QfMat::zero(ObjList::single(2), ObjList::zero()));
        let c = build_cover(&zero).unwrap();
        assert!(c.is_empty());
    }
}
