//! Explicit squishers: the upper family `1 − ν` and the lower family
//! `1 − ε − μ′`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::finset::{enumerate_functions, enumerate_permutations, factorial, FinFn};
use crate::linalg::{q, QMatrix, Rational};
use crate::qf::{epsilon, LinComb};

/// Largest `k` accepted by [`lower_squisher`] unless the cap is lifted.
pub const LOWER_DEFAULT_MAX_K: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquisherKind {
    Upper { k: usize, n: usize },
    Lower { k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Squisher {
    pub element: LinComb,
    pub kind: SquisherKind,
}

impl Squisher {
    /// Whether every function in the support is non-bijective.
    pub fn avoids_bijections(&self) -> bool {
        self.element.terms().all(|(f, _)| !f.is_bijective())
    }

    /// The defining identity on every `h ∈ 𝓕([k], [n])`: upper squishers
    /// fix `h`, lower squishers act as `1 − ε_{k+1}` does.
    pub fn check_contract(&self) -> Result<()> {
        let (k, n, expected): (usize, usize, Box<dyn Fn(&LinComb) -> Result<LinComb>>) = match self.kind {
            SquisherKind::Upper { k, n } => (k, n, Box::new(|h: &LinComb| Ok(h.clone()))),
            SquisherKind::Lower { k } => {
                let one_minus_eps = LinComb::identity(k + 1).sub(&epsilon(k + 1))?;
                (k, k + 1, Box::new(move |h: &LinComb| h.compose(&one_minus_eps)))
            }
        };
        for f in enumerate_functions(k, n) {
            let h = LinComb::from_fn(f.clone());
            if h.compose(&self.element)? != expected(&h)? {
                return Err(Error::Verification(format!("squisher fails on {f}")));
            }
        }
        if let SquisherKind::Lower { .. } = self.kind {
            if !self.avoids_bijections() {
                return Err(Error::Verification("lower squisher has bijections in its support".into()));
            }
        }
        Ok(())
    }
}

/// `v_1 ⊗ ⋯ ⊗ v_m` as an element of `ℚ𝓕([m],[n])`; factor `i` lists
/// `(value, coefficient)` pairs with 1-based values.
fn tensor(factors: &[Vec<(usize, i64)>], n: usize) -> Result<LinComb> {
    let mut terms: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), q(1))];
    for factor in factors {
        let mut next = Vec::new();
        for (vals, c) in &terms {
            for &(v, a) in factor {
                let mut vals = vals.clone();
                vals.push(v);
                next.push((vals, c * q(a)));
            }
        }
        terms = next;
    }
    let terms: Vec<(FinFn, Rational)> = terms.into_iter().map(|(v, c)| Ok((FinFn::new(&v, n)?, c))).collect::<Result<_>>()?;
    LinComb::from_terms(factors.len(), n, terms)
}

/// `ν = e_1 ⊗ ⋯ ⊗ e_{n−k−1} ⊗ (e_{n−k} − e_{n−k−1}) ⊗ ⋯ ⊗ (e_n − e_{n−1})`.
pub fn nu_vector(k: usize, n: usize) -> Result<LinComb> {
    if n <= k + 1 {
        return Err(Error::Invalid(format!("ν needs n > k + 1, got k = {k}, n = {n}")));
    }
    let factors: Vec<Vec<(usize, i64)>> = (1..=n).map(|i| if i < n - k { vec![(i, 1)] } else { vec![(i, 1), (i - 1, -1)] }).collect();
    tensor(&factors, n)
}

/// Squishes `⊗^n` through `⊗^{≤k+1}` relative to `⊗^k`: the identity when
/// `n ≤ k + 1`, and `1 − ν` otherwise.
pub fn upper_squisher(k: usize, n: usize) -> Result<Squisher> {
    let element = if n <= k + 1 { LinComb::identity(n) } else { LinComb::identity(n).sub(&nu_vector(k, n)?)? };
    Ok(Squisher { element, kind: SquisherKind::Upper { k, n } })
}

/// `μ = (e_1 − e_2) ⊗ (e_2 − e_1) ⊗ (e_3 − e_2) ⊗ ⋯ ⊗ (e_{k+1} − e_k)`.
pub fn mu_vector(k: usize) -> Result<LinComb> {
    if k == 0 {
        return Err(Error::Invalid("μ needs k ≥ 1".into()));
    }
    let mut factors = vec![vec![(1, 1), (2, -1)]];
    factors.extend((2..=k + 1).map(|i| vec![(i, 1), (i - 1, -1)]));
    tensor(&factors, k + 1)
}

/// The bijective part of `v`, as coordinates over `S_m` in enumeration order.
fn bijective_part(v: &LinComb, index: &BTreeMap<FinFn, usize>) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); index.len()];
    for (f, c) in v.terms() {
        if let Some(&i) = index.get(f) {
            out[i] = c.clone();
        }
    }
    out
}

/// `ω = 1 − ε − μ′` with `μ′` in the two-sided ideal of `μ` and
/// `μ′ ≡ 1 − ε` modulo non-bijections. Non-bijections form a two-sided
/// ideal, so only products `σ·μ·τ` of permutations reach `ℚS_{k+1}`; the
/// system is solved there and the first reduced solution is taken.
pub fn lower_squisher(k: usize, lift_cap: bool) -> Result<Squisher> {
    if k > LOWER_DEFAULT_MAX_K && !lift_cap {
        return Err(Error::Invalid(format!("lower squisher for k = {k} exceeds the default limit {LOWER_DEFAULT_MAX_K}")));
    }
    if k == 0 {
        return Ok(Squisher { element: LinComb::zero(1, 1), kind: SquisherKind::Lower { k } });
    }
    let m = k + 1;
    let mu = mu_vector(k)?;
    let perms: Vec<LinComb> = enumerate_permutations(m).into_iter().map(LinComb::from_fn).collect();
    let index: BTreeMap<FinFn, usize> = enumerate_permutations(m).into_iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut products = Vec::with_capacity(perms.len() * perms.len());
    let mut columns = Vec::with_capacity(products.capacity());
    for a in &perms {
        let am = a.compose(&mu)?;
        for b in &perms {
            let p = am.compose(b)?;
            columns.push(bijective_part(&p, &index));
            products.push(p);
        }
    }
    let one_minus_eps = LinComb::identity(m).sub(&epsilon(m))?;
    let rhs = bijective_part(&one_minus_eps, &index);
    let rows = factorial(m) as usize;
    let coeffs = QMatrix::from_columns(rows, &columns)?
        .solve(&rhs)
        .ok_or_else(|| Error::Internal(format!("no μ′ found for k = {k}")))?;
    let mut mu_prime = LinComb::zero(m, m);
    for (c, p) in coeffs.iter().zip(&products) {
        if !c.is_zero() {
            mu_prime = mu_prime.add(&p.scale(c))?;
        }
    }
    let element = one_minus_eps.sub(&mu_prime)?;
    Ok(Squisher { element, kind: SquisherKind::Lower { k } })
}

/// The image of `v` in `ℚS_m` modulo non-bijections.
pub fn modulo_non_bijections(v: &LinComb) -> LinComb {
    let terms: Vec<(FinFn, Rational)> = v.terms().filter(|(f, _)| f.is_bijective()).map(|(f, c)| (f.clone(), c.clone())).collect();
    LinComb::from_terms(v.dom(), v.cod(), terms).expect("same interface")
}

/// Whether `h·v = 0` for every function `h: [k] → [m]`.
pub fn annihilates(v: &LinComb, k: usize) -> bool {
    enumerate_functions(k, v.dom()).into_iter().all(|f| LinComb::from_fn(f).compose(v).map(|x| x.is_zero()).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lc(s: &str, d: usize, c: usize) -> LinComb {
        LinComb::parse(s, d, c).unwrap()
    }

    #[test]
    fn upper_example() {
        let s = upper_squisher(2, 4).unwrap();
        assert_eq!(s.element, lc("1123 - 1124 - 1133 + 1134 - 1223 + 1224 + 1233", 4, 4));
        assert_eq!(lc("14", 2, 4).compose(&s.element).unwrap(), lc("14", 2, 4));
        assert!(s.avoids_bijections());
        s.check_contract().unwrap();
    }

    #[test]
    fn upper_contract_small() {
        for k in 0..=2 {
            for n in 0..=4 {
                let s = upper_squisher(k, n).unwrap();
                s.check_contract().unwrap();
                if n <= k + 1 {
                    assert_eq!(s.element, LinComb::identity(n));
                } else {
                    assert!(s.avoids_bijections());
                }
            }
        }
    }

    #[test]
    fn mu_properties() {
        assert_eq!(mu_vector(1).unwrap(), lc("12 - 11 - 22 + 21", 2, 2));
        for k in 1..=3 {
            let mu = mu_vector(k).unwrap();
            assert!(annihilates(&mu, k));
            let expect = LinComb::identity(k + 1).add(&LinComb::from_fn(FinFn::new(&[&[2, 1][..], &(3..=k + 1).collect::<Vec<_>>()].concat(), k + 1).unwrap())).unwrap();
            assert_eq!(modulo_non_bijections(&mu), expect);
        }
    }

    #[test]
    fn lower_contract() {
        for k in 0..=3 {
            let s = lower_squisher(k, false).unwrap();
            s.check_contract().unwrap();
        }
        let s = lower_squisher(2, false).unwrap();
        let h = lc("13 + 31", 2, 3);
        assert_eq!(h.compose(&s.element).unwrap(), h);
        assert_eq!(lower_squisher(0, false).unwrap().element, LinComb::zero(1, 1));
        assert!(lower_squisher(4, false).is_err());
    }

    #[test]
    fn explicit_lower_example_meets_contract() {
        let w = lc(
            "-1/6*111 - 1/4*112 + 5/12*113 + 5/12*121 + 5/12*122 - 1/4*131 + 5/12*133 + 1/12*211 + 1/12*212 - 1/4*221 - 1/6*222 + 5/12*223 + 1/12*232 - 1/4*233 + 1/12*311 - 1/4*313 - 1/4*322 + 5/12*323 + 1/12*331 + 1/12*332 - 1/6*333",
            3,
            3,
        );
        Squisher { element: w, kind: SquisherKind::Lower { k: 2 } }.check_contract().unwrap();
    }
}
