//! Rational polynomials in one and several variables, and the symmetric
//! functions `h_k`, `e_k`, `s_λ` written in power sums `p_i ↦ x_i`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::finset::{enumerate_permutations, Partition};
use crate::linalg::{q, Rational};

/// A polynomial in `n`; `coeffs[i]` multiplies `n^i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable `n`.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![q(0), q(1)])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[Rational], i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly::from_coeffs((0..len).map(|i| at(&self.coeffs, i) + at(&other.coeffs, i)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, n: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * n + c)
    }

    /// `C(n, k)` as a polynomial in `n`.
    pub fn binomial(k: usize) -> Poly {
        let mut p = Poly::constant(q(1));
        for i in 0..k {
            let factor = Poly::from_coeffs(vec![q(-(i as i64)), q(1)]);
            p = p.mul(&factor).scale(&q(i as i64 + 1).recip());
        }
        p
    }

    /// `dim S_λ(ℚⁿ)` by the hook-content formula.
    pub fn schur_dim(lambda: &Partition) -> Poly {
        let mut p = Poly::constant(q(1));
        for (c, h) in lambda.contents().into_iter().zip(lambda.hooks()) {
            let factor = Poly::from_coeffs(vec![q(c), q(1)]);
            p = p.mul(&factor).scale(&q(h as i64).recip());
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            let mono = match i {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{i}"),
            };
            (c.clone(), mono)
        });
        write_terms(f, terms)
    }
}

/// A polynomial in `x_0, x_1, …`; keys are exponent vectors without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut m = MPoly::zero();
        m.add_term(Vec::new(), c);
        m
    }

    /// The variable `x_i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut m = MPoly::zero();
        m.add_term(e, q(1));
        m
    }

    fn add_term(&mut self, mut exps: Vec<u32>, c: Rational) {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let entry = self.terms.entry(exps).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Largest variable index that occurs.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter(|e| !e.is_empty()).map(|e| e.len() - 1).max()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        let mut out = MPoly::zero();
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let len = e1.len().max(e2.len());
                let e = (0..len).map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    /// Evaluates with `x_i = values[i]`; missing values count as zero.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let x = values.get(i).cloned().unwrap_or_else(Rational::zero);
                    t *= num_traits::pow(x, k as usize);
                }
            }
            total += t;
        }
        total
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // graded, highest total degree first
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let terms = keys.into_iter().map(|e| {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            (self.terms[e].clone(), mono.join("*"))
        });
        write_terms(f, terms)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (Rational, String)>) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        let neg = c < Rational::zero();
        let a = if neg { -c } else { c };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        match (a.is_one(), mono.is_empty()) {
            (_, true) => write!(f, "{a}")?,
            (true, false) => write!(f, "{mono}")?,
            (false, false) => write!(f, "{a}*{mono}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// `h_0, …, h_k` in power sums, by `k·h_k = Σ p_i h_{k−i}`.
pub fn complete_homogeneous(k: usize) -> Vec<MPoly> {
    let mut h = vec![MPoly::constant(q(1))];
    for m in 1..=k {
        let mut acc = MPoly::zero();
        for i in 1..=m {
            acc = acc.add(&MPoly::var(i).mul(&h[m - i]));
        }
        h.push(acc.scale(&q(m as i64).recip()));
    }
    h
}

/// `e_0, …, e_k` in power sums, by `k·e_k = Σ (−1)^{i−1} p_i e_{k−i}`.
pub fn elementary(k: usize) -> Vec<MPoly> {
    let mut e = vec![MPoly::constant(q(1))];
    for m in 1..=k {
        let mut acc = MPoly::zero();
        for i in 1..=m {
            let sign = if i % 2 == 1 { q(1) } else { q(-1) };
            acc = acc.add(&MPoly::var(i).mul(&e[m - i]).scale(&sign));
        }
        e.push(acc.scale(&q(m as i64).recip()));
    }
    e
}

/// `s_λ = det(h_{λ_i − i + j})` in power sums.
pub fn schur_polynomial(lambda: &Partition) -> MPoly {
    let l = lambda.len();
    if l == 0 {
        return MPoly::constant(q(1));
    }
    let h = complete_homogeneous(lambda.size());
    let entry = |i: usize, j: usize| -> MPoly {
        let idx = lambda.parts()[i] as i64 - i as i64 + j as i64;
        if idx < 0 {
            MPoly::zero()
        } else {
            h[idx as usize].clone()
        }
    };
    let mut det = MPoly::zero();
    for sigma in enumerate_permutations(l) {
        let mut term = MPoly::constant(q(sigma.sign().expect("a permutation") as i64));
        for i in 0..l {
            term = term.mul(&entry(i, sigma.at(i + 1) - 1));
            if term.is_zero() {
                break;
            }
        }
        det = det.add(&term);
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{partitions_of, schur_dim, specht_dim};
    use crate::linalg::qr;

    #[test]
    fn univariate_basics() {
        let b2 = Poly::binomial(2);
        assert_eq!(b2.coeffs(), &[q(0), qr(-1, 2), qr(1, 2)]);
        for n in 0..6 {
            assert_eq!(b2.eval(&q(n)), q(n * (n - 1) / 2));
        }
        assert_eq!(Poly::var().to_string(), "n");
        assert_eq!(b2.to_string(), "1/2*n^2 - 1/2*n");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn hook_content_matches_table() {
        for k in 0..=4 {
            for lam in partitions_of(k) {
                let p = Poly::schur_dim(&lam);
                for n in 0..=5 {
                    assert_eq!(p.eval(&q(n as i64)), q(schur_dim(&lam, n) as i64), "{lam} at {n}");
                }
            }
        }
    }

    #[test]
    fn low_degree_symmetric_functions() {
        let e = elementary(2);
        assert_eq!(e[2].to_string(), "1/2*x1^2 - 1/2*x2");
        let h = complete_homogeneous(2);
        assert_eq!(h[2].to_string(), "1/2*x1^2 + 1/2*x2");
        assert_eq!(schur_polynomial(&Partition::column(2)), e[2]);
        assert_eq!(schur_polynomial(&Partition::row(2)), h[2]);
        assert_eq!(schur_polynomial(&Partition::empty()), MPoly::constant(q(1)));
    }

    #[test]
    fn frobenius_sum_is_power() {
        // Σ f_λ s_λ = p_1^k
        for k in 1..=4 {
            let mut total = MPoly::zero();
            for lam in partitions_of(k) {
                total = total.add(&schur_polynomial(&lam).scale(&q(specht_dim(&lam) as i64)));
            }
            let mut p = MPoly::constant(q(1));
            for _ in 0..k {
                p = p.mul(&MPoly::var(1));
            }
            assert_eq!(total, p);
        }
    }

    #[test]
    fn schur_polynomial_at_identity_is_dimension() {
        for lam in partitions_of(3) {
            let s = schur_polynomial(&lam);
            for n in 0..5i64 {
                let v: Vec<Rational> = (0..=3).map(|_| q(n)).collect();
                assert_eq!(s.eval(&v), q(schur_dim(&lam, n as usize) as i64));
            }
        }
    }
}
