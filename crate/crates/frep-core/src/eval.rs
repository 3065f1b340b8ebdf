//! Brute-force evaluation of a presentation at `[n]`: the numerator and
//! denominator subspaces of `ℚ𝓕(X, [n])`, dimensions, traces and characters.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::finset::{partitions_of, FinFn, Partition};
use crate::linalg::{QMatrix, Rational, Subspace};
use crate::presentation::Presentation;
use crate::qf::{postcompose, LinComb, ObjList, QfMat};

/// Resource guardrail on the size of evaluated coordinate spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub row_cap: usize,
}

impl Limits {
    pub const DEFAULT_ROW_CAP: usize = 100_000;

    /// Reads `FREP_ROW_CAP`, falling back to the default cap.
    pub fn from_env() -> Self {
        let row_cap = std::env::var("FREP_ROW_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&c: &usize| c > 0)
            .unwrap_or(Self::DEFAULT_ROW_CAP);
        Limits { row_cap }
    }

    pub fn with_cap(row_cap: usize) -> Self {
        Limits { row_cap }
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if dim > self.row_cap {
            return Err(Error::Cap { dim, cap: self.row_cap });
        }
        Ok(())
    }

    /// Checks every coordinate space a map touches at `[n]`.
    pub fn check_map(&self, m: &QfMat, n: usize) -> Result<()> {
        self.check(m.src().dim_at(n))?;
        self.check(m.dst().dim_at(n))
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::from_env()
    }
}

/// Column span of `m` evaluated at `[n]`, inside `ℚ𝓕(src, [n])`.
pub fn image_at(m: &QfMat, n: usize) -> Subspace {
    Subspace::from_vectors(m.src().dim_at(n), m.columns_at(n))
}

/// `V[n]` as a pair of nested subspaces of `ℚ𝓕(X, [n])`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub n: usize,
    pub numerator: Subspace,
    pub denominator: Subspace,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.numerator.dim() - self.denominator.dim()
    }
}

pub fn quotient_at(p: &Presentation, n: usize, limits: &Limits) -> Result<Quotient> {
    limits.check_map(&p.f, n)?;
    limits.check(p.z().dim_at(n))?;
    let numerator = image_at(&p.f, n);
    let denominator = image_at(&p.relations(), n);
    Ok(Quotient { n, numerator, denominator })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalResult {
    pub n: usize,
    pub dim: usize,
    /// Columns spanning the numerator, in reduced echelon form.
    pub numerator_basis: QMatrix,
    /// Columns spanning the denominator, in reduced echelon form.
    pub denominator_basis: QMatrix,
}

pub fn eval(p: &Presentation, n: usize) -> Result<EvalResult> {
    eval_with(p, n, &Limits::default())
}

pub fn eval_with(p: &Presentation, n: usize, limits: &Limits) -> Result<EvalResult> {
    let q = quotient_at(p, n, limits)?;
    let amb = p.x().dim_at(n);
    Ok(EvalResult {
        n,
        dim: q.dim(),
        numerator_basis: QMatrix::from_sparse_columns(amb, &q.numerator.canonical_basis()),
        denominator_basis: QMatrix::from_sparse_columns(amb, &q.denominator.canonical_basis()),
    })
}

/// `dim V[n]`.
pub fn dim_at(p: &Presentation, n: usize) -> Result<usize> {
    Ok(quotient_at(p, n, &Limits::default())?.dim())
}

/// Trace of `V(φ)` for an endofunction `φ` of `[n]`.
pub fn endo_trace(p: &Presentation, n: usize, phi: &FinFn) -> Result<Rational> {
    if phi.dom() != n || phi.cod() != n {
        return Err(Error::Invalid(format!("{phi} is not an endofunction of [{n}]")));
    }
    let q = quotient_at(p, n, &Limits::default())?;
    trace_on(&q, p.x(), &LinComb::from_fn(phi.clone()))
}

/// Trace of right multiplication by `e ∈ ℚ𝓕([n],[n])` on the quotient.
pub(crate) fn trace_on(q: &Quotient, x: &ObjList, e: &LinComb) -> Result<Rational> {
    let n = q.n;
    let op = |v: &_| postcompose(x, v, n, e);
    Ok(q.numerator.trace_of(op)? - q.denominator.trace_of(op)?)
}

/// The character of `V[n]` at a permutation.
pub fn character(p: &Presentation, n: usize, sigma: &FinFn) -> Result<Rational> {
    if !sigma.is_bijective() || sigma.dom() != n {
        return Err(Error::Invalid(format!("{sigma} is not a permutation of [{n}]")));
    }
    endo_trace(p, n, sigma)
}

/// A permutation of the given cycle type, cycles laid out left to right.
pub fn cycle_representative(mu: &Partition) -> FinFn {
    let n = mu.size();
    let mut values = vec![0usize; n];
    let mut start = 0;
    for &len in mu.parts() {
        for i in 0..len {
            values[start + i] = start + (i + 1) % len + 1;
        }
        start += len;
    }
    FinFn::new(&values, n).expect("a permutation")
}

/// Character values by cycle type; each value is checked on a second,
/// conjugate representative.
pub fn character_table(p: &Presentation, n: usize) -> Result<BTreeMap<Partition, Rational>> {
    let q = quotient_at(p, n, &Limits::default())?;
    let reversal = FinFn::new(&(1..=n).rev().collect::<Vec<_>>(), n)?;
    let mut out = BTreeMap::new();
    for mu in partitions_of(n) {
        let s = cycle_representative(&mu);
        let value = trace_on(&q, p.x(), &LinComb::from_fn(s.clone()))?;
        let conj = reversal.then(&s).then(&reversal);
        let again = trace_on(&q, p.x(), &LinComb::from_fn(conj))?;
        if again != value {
            return Err(Error::Internal(format!("character differs on conjugates of cycle type {mu}")));
        }
        out.insert(mu, value);
    }
    Ok(out)
}

/// Rank of right multiplication by the idempotent `e` on `V[k]`.
pub fn hom_dim(e: &LinComb, p: &Presentation, k: usize) -> Result<usize> {
    if e.dom() != k || e.cod() != k {
        return Err(Error::Invalid(format!("idempotent must be [{k}]→[{k}]")));
    }
    if !e.is_idempotent() {
        return Err(Error::Invalid("element is not idempotent".into()));
    }
    let q = quotient_at(p, k, &Limits::default())?;
    let mut span = q.denominator.clone();
    for v in q.numerator.basis_ref() {
        span.insert(&postcompose(p.x(), v, k, e));
    }
    Ok(span.dim() - q.denominator.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{binomial, enumerate_permutations};
    use crate::linalg::q;
    use crate::presentation::{builtin_presentation, parse_presentation, Builtin};

    fn intro() -> Presentation {
        parse_presentation("object Y = [2]\nmap g : Y -> [3] = [[ 11 + 22 + 33 - 3*12 + 3*13 - 3*23 ]]\npresent V = <Y> / <g>").unwrap()
    }

    #[test]
    fn intro_dimensions() {
        let p = intro();
        for n in 0..=4 {
            assert_eq!(eval(&p, n).unwrap().dim, n);
        }
    }

    #[test]
    fn intro_character_is_fixed_points() {
        let p = intro();
        for n in 0..=3 {
            for s in enumerate_permutations(n) {
                let a1 = s.fixed_point_counts(1).unwrap().first().copied().unwrap_or(0);
                assert_eq!(character(&p, n, &s).unwrap(), q(a1 as i64));
            }
        }
        let t = character_table(&p, 3).unwrap();
        let vals: Vec<_> = t.values().cloned().collect();
        assert_eq!(vals, vec![q(3), q(1), q(0)]);
    }

    #[test]
    fn tensor_square_character() {
        let p = builtin_presentation(&Builtin::Tensor(2));
        for s in enumerate_permutations(3) {
            let a1 = s.fixed_point_counts(1).unwrap()[0] as i64;
            assert_eq!(character(&p, 3, &s).unwrap(), q(a1 * a1));
        }
    }

    #[test]
    fn lambda_and_theta_dims() {
        for k in 0..=3 {
            for n in 0..=4 {
                let l = dim_at(&builtin_presentation(&Builtin::Lambda(k)), n).unwrap();
                assert_eq!(l as u64, binomial(n, k));
                let t = dim_at(&builtin_presentation(&Builtin::Theta(k)), n).unwrap();
                assert_eq!(t as u64, crate::finset::pow(n, k) as u64 - binomial(n, k));
                let s = dim_at(&builtin_presentation(&Builtin::Sym(k)), n).unwrap();
                assert_eq!(s as u64, if n + k == 0 { 1 } else { binomial(n + k - 1, k) });
            }
        }
    }

    #[test]
    fn hom_dim_examples() {
        let t3 = builtin_presentation(&Builtin::Tensor(3));
        assert_eq!(hom_dim(&crate::qf::epsilon(2), &t3, 2).unwrap(), 4);
        assert_eq!(hom_dim(&LinComb::identity(2), &intro(), 2).unwrap(), 2);
        assert!(hom_dim(&LinComb::parse("12 + 21", 2, 2).unwrap(), &t3, 2).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let p = builtin_presentation(&Builtin::Tensor(3));
        let e = quotient_at(&p, 5, &Limits::with_cap(100)).unwrap_err();
        assert_eq!(e, Error::Cap { dim: 125, cap: 100 });
    }

    #[test]
    fn endofunction_trace() {
        // V(φ) on ⊗¹[2] for φ = 11 is the matrix sending both basis vectors to e_1
        let p = builtin_presentation(&Builtin::Tensor(1));
        assert_eq!(endo_trace(&p, 2, &FinFn::parse("11", 2).unwrap()).unwrap(), q(1));
        assert!(character(&p, 2, &FinFn::parse("11", 2).unwrap()).is_err());
    }
}
