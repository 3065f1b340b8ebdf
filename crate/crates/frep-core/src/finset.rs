//! Functions between the finite sets `[k] = {1..k}`, partitions, and the
//! counting formulas attached to them.
//!
//! Composition is written left to right: `f.compose(&g)` is "f then g".

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A function `[dom] → [cod]`. Values are stored zero-based; the public
/// constructors and the one-line notation are one-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinFn {
    cod: usize,
    values: Vec<u32>,
}

impl FinFn {
    /// Builds a function from one-based values.
    pub fn new(values: &[usize], cod: usize) -> Result<Self> {
        let mut v = Vec::with_capacity(values.len());
        for &x in values {
            if x == 0 || x > cod {
                return Err(Error::Invalid(format!("value {x} out of range 1..={cod}")));
            }
            v.push((x - 1) as u32);
        }
        Ok(FinFn { cod, values: v })
    }

    pub(crate) fn from_zero_based(values: Vec<u32>, cod: usize) -> Self {
        debug_assert!(values.iter().all(|&x| (x as usize) < cod));
        FinFn { cod, values }
    }

    pub fn identity(k: usize) -> Self {
        FinFn { cod: k, values: (0..k as u32).collect() }
    }

    /// The inclusion `[k] → [k+1]`, one-line `1 2 … k`.
    pub fn inclusion(k: usize) -> Self {
        FinFn { cod: k + 1, values: (0..k as u32).collect() }
    }

    pub fn dom(&self) -> usize {
        self.values.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    /// One-based value at one-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.values[i - 1] as usize + 1
    }

    /// One-based values.
    pub fn values(&self) -> Vec<usize> {
        self.values.iter().map(|&x| x as usize + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.values
    }

    /// `self` then `g`.
    pub fn compose(&self, g: &FinFn) -> Result<FinFn> {
        if self.cod != g.dom() {
            return Err(Error::Shape(format!(
                "cannot compose [{}]→[{}] with [{}]→[{}]",
                self.dom(),
                self.cod,
                g.dom(),
                g.cod
            )));
        }
        Ok(self.then(g))
    }

    pub(crate) fn then(&self, g: &FinFn) -> FinFn {
        FinFn { cod: g.cod, values: self.values.iter().map(|&x| g.values[x as usize]).collect() }
    }

    /// Position in [`enumerate_functions`] order.
    pub fn index(&self) -> usize {
        self.values.iter().fold(0usize, |acc, &x| acc * self.cod + x as usize)
    }

    /// Inverse of [`FinFn::index`].
    pub fn from_index(mut idx: usize, dom: usize, cod: usize) -> FinFn {
        let mut values = vec![0u32; dom];
        for slot in values.iter_mut().rev() {
            *slot = (idx % cod) as u32;
            idx /= cod;
        }
        FinFn { cod, values }
    }

    pub fn image_size(&self) -> usize {
        let mut seen = vec![false; self.cod];
        self.values.iter().filter(|&&x| !std::mem::replace(&mut seen[x as usize], true)).count()
    }

    pub fn is_injective(&self) -> bool {
        self.image_size() == self.dom()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_size() == self.cod
    }

    pub fn is_bijective(&self) -> bool {
        self.dom() == self.cod && self.is_injective()
    }

    fn require_bijection(&self) -> Result<()> {
        if self.is_bijective() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{self} is not a permutation")))
        }
    }

    pub fn inverse(&self) -> Result<FinFn> {
        self.require_bijection()?;
        let mut inv = vec![0u32; self.cod];
        for (i, &x) in self.values.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Ok(FinFn { cod: self.cod, values: inv })
    }

    /// Cycle lengths of the orbits of an endofunction's bijective part; for
    /// a permutation these are all its cycles.
    fn cycles(&self) -> Vec<usize> {
        let mut seen = vec![false; self.dom()];
        let mut out = Vec::new();
        for s in 0..self.dom() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.values[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn sign(&self) -> Result<i32> {
        self.require_bijection()?;
        let odd = self.cycles().iter().filter(|&&l| l % 2 == 0).count();
        Ok(if odd % 2 == 0 { 1 } else { -1 })
    }

    pub fn cycle_type(&self) -> Result<Partition> {
        self.require_bijection()?;
        Partition::new(self.cycles())
    }

    /// `a_1..a_m` where `a_i` counts the fixed points of the `i`-th iterate.
    pub fn fixed_point_counts(&self, up_to: usize) -> Result<Vec<usize>> {
        if self.dom() != self.cod {
            return Err(Error::Invalid(format!("{self} is not an endofunction")));
        }
        let mut out = Vec::with_capacity(up_to);
        let mut iter: Vec<u32> = self.values.clone();
        for _ in 0..up_to {
            out.push(iter.iter().enumerate().filter(|(i, &x)| *i == x as usize).count());
            iter = iter.iter().map(|&x| self.values[x as usize]).collect();
        }
        Ok(out)
    }

    /// Parses one-line notation (`3322225`, `(10,3,2)`, `()`) for a function into `[cod]`.
    pub fn parse(text: &str, cod: usize) -> Result<FinFn> {
        let t = text.trim();
        let values: Vec<usize> = if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            let inner = inner.trim();
            if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad function literal `{t}`"))))
                    .collect::<Result<_>>()?
            }
        } else if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit()) {
            t.chars().map(|c| c.to_digit(10).unwrap() as usize).collect()
        } else {
            return Err(Error::Invalid(format!("bad function literal `{t}`")));
        };
        FinFn::new(&values, cod)
    }
}

impl fmt::Display for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dom() == 0 {
            return write!(f, "()");
        }
        if self.cod <= 9 && self.dom() <= 9 {
            for &x in &self.values {
                write!(f, "{}", x + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⌊{self}⌋:[{}]→[{}]", self.dom(), self.cod)
    }
}

/// `q^p` as a count, with `0^0 = 1`.
pub fn pow(q: usize, p: usize) -> usize {
    q.checked_pow(p as u32).expect("function count overflows usize")
}

/// All functions `[p] → [q]`, lexicographic with position 1 most significant.
pub fn enumerate_functions(p: usize, q: usize) -> Vec<FinFn> {
    (0..pow(q, p)).map(|i| FinFn::from_index(i, p, q)).collect()
}

/// Injections `[p] → [q]` in lexicographic order.
pub fn enumerate_injections(p: usize, q: usize) -> Vec<FinFn> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    let mut used = vec![false; q];
    fn rec(p: usize, q: usize, cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<FinFn>) {
        if cur.len() == p {
            out.push(FinFn::from_zero_based(cur.clone(), q));
            return;
        }
        for x in 0..q {
            if !used[x] {
                used[x] = true;
                cur.push(x as u32);
                rec(p, q, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    if p <= q {
        rec(p, q, &mut cur, &mut used, &mut out);
    }
    out
}

pub fn enumerate_permutations(k: usize) -> Vec<FinFn> {
    enumerate_injections(k, k)
}

/// The `C(k,2)` surjections `[k] → [k−1]` that identify one pair `i < j` and
/// keep the order of first occurrences, listed by the pair `(i, j)`. Every
/// non-injective function out of `[k]` factors through one of them.
pub fn pair_merges(k: usize) -> Vec<FinFn> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut values = Vec::with_capacity(k);
            let mut next = 0u32;
            for x in 0..k {
                if x == j {
                    values.push(values[i]);
                } else {
                    values.push(next);
                    next += 1;
                }
            }
            out.push(FinFn::from_zero_based(values, k - 1));
        }
    }
    out
}

/// An integer partition, parts in weakly decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(k)`; empty for `k = 0`.
    pub fn row(k: usize) -> Self {
        Partition { parts: if k == 0 { vec![] } else { vec![k] } }
    }

    /// The one-column partition `(1^k)`.
    pub fn column(k: usize) -> Self {
        Partition { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        Partition { parts: (0..cols).map(|c| self.parts.iter().filter(|&&r| r > c).count()).collect() }
    }

    /// Hook lengths, row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (i, &r) in self.parts.iter().enumerate() {
            for j in 0..r {
                out.push((r - j - 1) + (conj.parts[j] - i - 1) + 1);
            }
        }
        out
    }

    /// Contents `j − i` of the cells, row by row.
    pub fn contents(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.size());
        for (i, &r) in self.parts.iter().enumerate() {
            for j in 0..r {
                out.push(j as i64 - i as i64);
            }
        }
        out
    }

    /// Compact text `2,1`; empty partition is the empty string.
    pub fn compact(&self) -> String {
        self.parts.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }

    /// Parses `2,1`, `(2,1)` or the empty string.
    pub fn parse(text: &str) -> Result<Partition> {
        let t = text.trim();
        let t = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t).trim();
        if t.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad partition `{text}`"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.compact())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Partitions of `k` in increasing lexicographic order of their parts,
/// e.g. `(1,1,1), (2,1), (3)`.
pub fn partitions_of(k: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out.reverse();
    out
}

fn to_u64(x: BigInt) -> u64 {
    x.to_u64().expect("count does not fit in u64")
}

/// Number of standard Young tableaux of shape `λ` (hook length formula).
pub fn specht_dim(lambda: &Partition) -> u64 {
    let mut num = BigInt::from(1);
    for i in 2..=lambda.size() {
        num *= i;
    }
    let den = lambda.hooks().into_iter().fold(BigInt::from(1), |acc, h| acc * h);
    to_u64(num / den)
}

/// Dimension of the Schur functor `S_λ(ℚ^n)` (hook content formula).
pub fn schur_dim(lambda: &Partition, n: usize) -> u64 {
    let mut num = BigInt::from(1);
    for c in lambda.contents() {
        let v = n as i64 + c;
        if v <= 0 {
            return 0;
        }
        num *= v;
    }
    let den = lambda.hooks().into_iter().fold(BigInt::from(1), |acc, h| acc * h);
    to_u64(num / den)
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    to_u64(acc)
}

/// Stirling numbers of the second kind via `S(n,k) = k·S(n−1,k) + S(n−1,k−1)`.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::from(1);
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] = &row[j] * j + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    to_u64(row[k].clone())
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str, cod: usize) -> FinFn {
        FinFn::parse(s, cod).unwrap()
    }

    #[test]
    fn compose_display_example() {
        let a = f("3322225", 5);
        let b = f("78911", 9);
        assert_eq!(a.compose(&b).unwrap(), f("9988881", 9));
        assert_eq!(a.compose(&FinFn::identity(5)).unwrap(), a);
        assert!(b.compose(&a).is_err());
    }

    #[test]
    fn compose_is_associative_and_unital() {
        for p in 0..=3 {
            for q in 0..=3 {
                for r in 0..=3 {
                    for s in 0..=2 {
                        for a in enumerate_functions(p, q) {
                            assert_eq!(FinFn::identity(p).then(&a), a);
                            assert_eq!(a.then(&FinFn::identity(q)), a);
                            for b in enumerate_functions(q, r) {
                                for c in enumerate_functions(r, s) {
                                    assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_order_and_counts() {
        let names: Vec<String> = enumerate_functions(2, 2).iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["11", "12", "21", "22"]);
        assert_eq!(enumerate_functions(0, 5).len(), 1);
        assert_eq!(enumerate_functions(0, 0).len(), 1);
        assert!(enumerate_functions(3, 0).is_empty());
        for p in 0..4 {
            for q in 0..4 {
                let all = enumerate_functions(p, q);
                assert_eq!(all.len(), pow(q, p));
                for (i, g) in all.iter().enumerate() {
                    assert_eq!(g.index(), i);
                }
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(enumerate_permutations(3).len(), 6);
        assert_eq!(enumerate_injections(2, 3).len(), 6);
        assert!(enumerate_injections(3, 2).is_empty());
    }

    #[test]
    fn one_line_text_forms() {
        assert_eq!(FinFn::new(&[10, 3, 2], 10).unwrap().to_string(), "(10,3,2)");
        assert_eq!(f("(10,3,2)", 10).values(), vec![10, 3, 2]);
        assert_eq!(f("()", 4).dom(), 0);
        assert_eq!(f("()", 4).to_string(), "()");
        assert!(FinFn::parse("13", 2).is_err());
        assert!(FinFn::parse("1x", 2).is_err());
    }

    #[test]
    fn sign_cycles_fixed_points() {
        assert_eq!(FinFn::identity(4).fixed_point_counts(3).unwrap(), vec![4, 4, 4]);
        let t = f("213", 3);
        assert_eq!(t.fixed_point_counts(2).unwrap(), vec![1, 3]);
        assert_eq!(t.sign().unwrap(), -1);
        let c = f("231", 3);
        assert_eq!(c.fixed_point_counts(3).unwrap(), vec![0, 0, 3]);
        assert_eq!(c.sign().unwrap(), 1);
        assert_eq!(c.cycle_type().unwrap(), Partition::new(vec![3]).unwrap());
        assert!(f("112", 3).sign().is_err());
        // endofunction 1→2→2, 3→1: f^2 = 2,2,2
        assert_eq!(f("221", 3).fixed_point_counts(2).unwrap(), vec![1, 1]);
    }

    #[test]
    fn pair_merges_match_display() {
        let names: Vec<String> = pair_merges(4).iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["1123", "1213", "1231", "1223", "1232", "1233"]);
        assert!(pair_merges(1).is_empty());
    }

    #[test]
    fn partitions_listing() {
        let p3: Vec<String> = partitions_of(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(p3, ["(1,1,1)", "(2,1)", "(3)"]);
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(Partition::parse("1,2").unwrap().compact(), "2,1");
        assert_eq!(Partition::parse("()").unwrap(), Partition::empty());
    }

    /// Brute-force count of standard Young tableaux by removing corners.
    fn syt_count(parts: &[usize]) -> u64 {
        if parts.iter().all(|&p| p == 0) {
            return 1;
        }
        let mut total = 0;
        for i in 0..parts.len() {
            let below = parts.get(i + 1).copied().unwrap_or(0);
            if parts[i] > below {
                let mut q = parts.to_vec();
                q[i] -= 1;
                total += syt_count(&q);
            }
        }
        total
    }

    #[test]
    fn specht_dims() {
        for k in 0..=6 {
            let mut sum_sq = 0;
            for lam in partitions_of(k) {
                let d = specht_dim(&lam);
                assert_eq!(d, syt_count(lam.parts()), "{lam}");
                sum_sq += d * d;
            }
            assert_eq!(sum_sq, factorial(k));
        }
        assert_eq!(specht_dim(&Partition::new(vec![2, 2]).unwrap()), 2);
    }

    #[test]
    fn schur_weyl_dimension_count() {
        for k in 0..=4 {
            for n in 0..=5 {
                let total: u64 = partitions_of(k).iter().map(|l| specht_dim(l) * schur_dim(l, n)).sum();
                assert_eq!(total, pow(n, k) as u64);
            }
        }
        let l11 = Partition::column(2);
        let l2 = Partition::row(2);
        for n in 0..8 {
            assert_eq!(schur_dim(&l11, n), (n * n.saturating_sub(1) / 2) as u64);
            assert_eq!(schur_dim(&l2, n), (n * (n + 1) / 2) as u64);
        }
    }

    /// Number of set partitions of `[n]` into exactly `k` blocks, by
    /// enumerating restricted growth strings.
    fn set_partitions(n: usize, k: usize) -> u64 {
        fn rec(pos: usize, n: usize, k: usize, blocks: usize) -> u64 {
            if pos == n {
                return (blocks == k) as u64;
            }
            (0..=blocks).map(|b| rec(pos + 1, n, k, blocks.max(b + 1))).sum()
        }
        rec(0, n, k, 0)
    }

    #[test]
    fn stirling_numbers() {
        for n in 0..=7 {
            for k in 0..=8 {
                assert_eq!(stirling2(n, k), set_partitions(n, k), "S({n},{k})");
            }
        }
        assert_eq!(stirling2(3, 2), 3);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(2, 6), 0);
    }
}
