//! The linearised category ℚ𝓕: rational combinations of functions, block
//! matrices of them, the distinguished idempotents, and evaluation of all of
//! these as matrices acting on `ℚ𝓕(X, [n])`.
//!
//! A morphism `A: X → Y` acts on `ℚ𝓕(Y, [n])` by precomposition `h ↦ A·h`,
//! so its evaluation at `[n]` has one row per basis function out of `X` and
//! one column per basis function out of `Y`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::finset::{self, enumerate_functions, enumerate_permutations, factorial, pow, specht_dim, FinFn, Partition};
use crate::linalg::{q, QMatrix, Rational, SparseVec};

/// A finite rational combination of functions `[dom] → [cod]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb {
    dom: usize,
    cod: usize,
    terms: BTreeMap<FinFn, Rational>,
}

impl LinComb {
    pub fn zero(dom: usize, cod: usize) -> Self {
        LinComb { dom, cod, terms: BTreeMap::new() }
    }

    pub fn from_fn(f: FinFn) -> Self {
        let (dom, cod) = (f.dom(), f.cod());
        let mut terms = BTreeMap::new();
        terms.insert(f, Rational::one());
        LinComb { dom, cod, terms }
    }

    pub fn identity(k: usize) -> Self {
        Self::from_fn(FinFn::identity(k))
    }

    /// Sums the given terms; every function must be `[dom] → [cod]`.
    pub fn from_terms(dom: usize, cod: usize, terms: impl IntoIterator<Item = (FinFn, Rational)>) -> Result<Self> {
        let mut out = Self::zero(dom, cod);
        for (f, c) in terms {
            if f.dom() != dom || f.cod() != cod {
                return Err(Error::Shape(format!("term {f} is not a function [{dom}]→[{cod}]")));
            }
            out.add_term(f, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, f: FinFn, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(f) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FinFn, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, f: &FinFn) -> Rational {
        self.terms.get(f).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, b| a + b)
    }

    fn check_same(&self, other: &LinComb) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::Shape(format!(
                "cannot add [{}]→[{}] and [{}]→[{}]",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &LinComb) -> Result<LinComb> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LinComb) -> Result<LinComb> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> LinComb {
        if c.is_zero() {
            return Self::zero(self.dom, self.cod);
        }
        LinComb { dom: self.dom, cod: self.cod, terms: self.terms.iter().map(|(f, x)| (f.clone(), x * c)).collect() }
    }

    /// `self` then `other`, extended bilinearly.
    pub fn compose(&self, other: &LinComb) -> Result<LinComb> {
        if self.cod != other.dom {
            return Err(Error::Shape(format!(
                "cannot compose [{}]→[{}] with [{}]→[{}]",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        let mut acc: BTreeMap<FinFn, Rational> = BTreeMap::new();
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                *acc.entry(f.then(g)).or_insert_with(Rational::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(LinComb { dom: self.dom, cod: other.cod, terms: acc })
    }

    pub fn is_idempotent(&self) -> bool {
        self.dom == self.cod && self.compose(self).map(|sq| sq == *self).unwrap_or(false)
    }

    /// Coordinates in `ℚ𝓕([dom],[cod])`, indexed by [`FinFn::index`].
    pub fn to_sparse(&self) -> SparseVec {
        SparseVec::from_pairs(self.terms.iter().map(|(f, c)| (f.index(), c.clone())))
    }

    pub fn from_sparse(dom: usize, cod: usize, v: &SparseVec) -> LinComb {
        let terms = v.iter().map(|(i, c)| (FinFn::from_index(i, dom, cod), c.clone())).collect();
        LinComb { dom, cod, terms }
    }

    /// Parses `c1*F1 + c2*F2 - F3`; coefficients are integers or `p/q`,
    /// optionally parenthesised. `0` is the zero combination.
    pub fn parse(text: &str, dom: usize, cod: usize) -> Result<LinComb> {
        let mut out = LinComb::zero(dom, cod);
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Invalid("empty linear combination".into()));
        }
        for (sign, term) in split_signed_terms(t)? {
            let (coef, lit) = match top_level_star(&term) {
                Some(pos) => (parse_coefficient(&term[..pos])?, term[pos + 1..].trim().to_string()),
                None => (Rational::one(), term.clone()),
            };
            if lit == "0" {
                continue;
            }
            let f = FinFn::parse(&lit, cod)?;
            if f.dom() != dom {
                return Err(Error::Invalid(format!("function {lit} has {} values, expected {dom}", f.dom())));
            }
            out.add_term(f, if sign < 0 { -coef } else { coef });
        }
        Ok(out)
    }
}

fn split_signed_terms(t: &str) -> Result<Vec<(i32, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1;
    let mut cur = String::new();
    for ch in t.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        sign = -sign;
                    }
                } else {
                    out.push((sign, cur.trim().to_string()));
                    cur.clear();
                    sign = if ch == '-' { -1 } else { 1 };
                }
            }
            _ => cur.push(ch),
        }
    }
    if cur.trim().is_empty() {
        return Err(Error::Invalid(format!("dangling sign in `{t}`")));
    }
    out.push((sign, cur.trim().to_string()));
    Ok(out)
}

fn top_level_star(term: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_coefficient(s: &str) -> Result<Rational> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s).trim();
    let bad = || Error::Invalid(format!("bad coefficient `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{a}*{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]→[{}]: {self}", self.dom, self.cod)
    }
}

pub fn lc_add(u: &LinComb, v: &LinComb) -> Result<LinComb> {
    u.add(v)
}

pub fn lc_scale(u: &LinComb, c: &Rational) -> LinComb {
    u.scale(c)
}

pub fn lc_compose(u: &LinComb, v: &LinComb) -> Result<LinComb> {
    u.compose(v)
}

fn group_sum(k: usize, keep: impl Fn(&FinFn) -> bool, signed: bool) -> LinComb {
    let terms = enumerate_permutations(k).into_iter().filter(|s| keep(s)).map(|s| {
        let c = if signed { q(s.sign().expect("permutation") as i64) } else { q(1) };
        (s, c)
    });
    LinComb::from_terms(k, k, terms).expect("permutations of [k]")
}

/// τ_k, the averaging idempotent of ℚS_k.
pub fn tau(k: usize) -> LinComb {
    group_sum(k, |_| true, false).scale(&Rational::new(1.into(), factorial(k).into()))
}

/// ε_k, the signed averaging idempotent of ℚS_k.
pub fn epsilon(k: usize) -> LinComb {
    group_sum(k, |_| true, true).scale(&Rational::new(1.into(), factorial(k).into()))
}

/// The inclusion `ι_k: [k] → [k+1]`.
pub fn inclusion(k: usize) -> LinComb {
    LinComb::from_fn(FinFn::inclusion(k))
}

/// ∂_k = ε_k ι_k ε_{k+1}: [k] → [k+1].
pub fn partial(k: usize) -> LinComb {
    epsilon(k).compose(&inclusion(k)).and_then(|x| x.compose(&epsilon(k + 1))).expect("interfaces match")
}

/// The Young symmetrizer of the tableau filled row by row with `1..k`:
/// the row symmetrizer followed by the signed column symmetrizer, scaled by
/// `f_λ / k!` so that it is idempotent.
pub fn young_symmetrizer(lambda: &Partition) -> LinComb {
    let k = lambda.size();
    let mut row_of = Vec::with_capacity(k);
    let mut col_of = Vec::with_capacity(k);
    for (i, &r) in lambda.parts().iter().enumerate() {
        for j in 0..r {
            row_of.push(i);
            col_of.push(j);
        }
    }
    let preserves = |blocks: &[usize], s: &FinFn| (1..=k).all(|x| blocks[s.at(x) - 1] == blocks[x - 1]);
    let rows = group_sum(k, |s| preserves(&row_of, s), false);
    let cols = group_sum(k, |s| preserves(&col_of, s), true);
    let scale = Rational::new(specht_dim(lambda).into(), factorial(k).into());
    rows.compose(&cols).expect("both in ℚS_k").scale(&scale)
}

/// A formal direct sum `[a_1] ⊕ … ⊕ [a_m]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ObjList {
    sizes: Vec<usize>,
}

impl ObjList {
    pub fn new(sizes: Vec<usize>) -> Self {
        ObjList { sizes }
    }

    pub fn zero() -> Self {
        ObjList { sizes: Vec::new() }
    }

    pub fn single(k: usize) -> Self {
        ObjList { sizes: vec![k] }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn concat(&self, other: &ObjList) -> ObjList {
        ObjList { sizes: self.sizes.iter().chain(&other.sizes).copied().collect() }
    }

    /// Largest component, 0 for the zero object.
    pub fn max_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// `dim ℚ𝓕(self, [n]) = Σ n^{a_i}`.
    pub fn dim_at(&self, n: usize) -> usize {
        self.sizes.iter().map(|&a| pow(n, a)).sum()
    }

    /// Start of each block in `ℚ𝓕(self, [n])` coordinates, plus the total.
    pub fn offsets_at(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.sizes.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &a in &self.sizes {
            acc += pow(n, a);
            out.push(acc);
        }
        out
    }
}

impl fmt::Display for ObjList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sizes.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.sizes.iter().map(|a| format!("[{a}]")).collect();
        write!(f, "{}", parts.join(" (+) "))
    }
}

impl fmt::Debug for ObjList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A morphism `X → Y` of ℚ𝓕: entry `(i, j)` is a combination `[x_i] → [y_j]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QfMat {
    src: ObjList,
    dst: ObjList,
    entries: Vec<LinComb>,
}

impl QfMat {
    pub fn new(src: ObjList, dst: ObjList, entries: Vec<LinComb>) -> Result<Self> {
        if entries.len() != src.len() * dst.len() {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} block matrix",
                entries.len(),
                src.len(),
                dst.len()
            )));
        }
        for (idx, e) in entries.iter().enumerate() {
            let (i, j) = (idx / dst.len(), idx % dst.len());
            if e.dom() != src.sizes[i] || e.cod() != dst.sizes[j] {
                return Err(Error::Shape(format!(
                    "entry ({}, {}) is [{}]→[{}], expected [{}]→[{}]",
                    i + 1,
                    j + 1,
                    e.dom(),
                    e.cod(),
                    src.sizes[i],
                    dst.sizes[j]
                )));
            }
        }
        Ok(QfMat { src, dst, entries })
    }

    pub fn zero(src: ObjList, dst: ObjList) -> Self {
        let entries =
            src.sizes.iter().flat_map(|&a| dst.sizes.iter().map(move |&b| LinComb::zero(a, b))).collect();
        QfMat { src, dst, entries }
    }

    pub fn identity(x: &ObjList) -> Self {
        Self::diag(x.sizes.iter().map(|&a| LinComb::identity(a)).collect())
    }

    /// Block-diagonal matrix with the given entries on the diagonal.
    pub fn diag(blocks: Vec<LinComb>) -> Self {
        let src = ObjList::new(blocks.iter().map(LinComb::dom).collect());
        let dst = ObjList::new(blocks.iter().map(LinComb::cod).collect());
        let mut m = Self::zero(src, dst);
        for (i, b) in blocks.into_iter().enumerate() {
            m.set(i, i, b);
        }
        m
    }

    /// A single column `X → [k]` from one combination per component of `X`.
    pub fn column(src: ObjList, entries: Vec<LinComb>) -> Result<Self> {
        let k = entries.first().map(LinComb::cod).unwrap_or(0);
        Self::new(src, ObjList::single(k), entries)
    }

    pub fn src(&self) -> &ObjList {
        &self.src
    }

    pub fn dst(&self) -> &ObjList {
        &self.dst
    }

    pub fn get(&self, i: usize, j: usize) -> &LinComb {
        &self.entries[i * self.dst.len() + j]
    }

    /// Replaces an entry; panics if its interface does not fit the block.
    pub fn set(&mut self, i: usize, j: usize, v: LinComb) {
        assert_eq!((v.dom(), v.cod()), (self.src.sizes[i], self.dst.sizes[j]), "block interface");
        let w = self.dst.len();
        self.entries[i * w + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LinComb::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst
            && (0..self.src.len()).all(|i| {
                (0..self.dst.len())
                    .all(|j| if i == j { *self.get(i, j) == LinComb::identity(self.src.sizes[i]) } else { self.get(i, j).is_zero() })
            })
    }

    /// Column `j` as a single-column matrix `X → [y_j]`.
    pub fn column_mat(&self, j: usize) -> QfMat {
        let entries = (0..self.src.len()).map(|i| self.get(i, j).clone()).collect();
        QfMat { src: self.src.clone(), dst: ObjList::single(self.dst.sizes[j]), entries }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> QfMat {
        let dst = ObjList::new(cols.iter().map(|&j| self.dst.sizes[j]).collect());
        let entries = (0..self.src.len()).flat_map(|i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        QfMat { src: self.src.clone(), dst, entries }
    }

    /// `[self | other]`, sharing the source.
    pub fn hstack(&self, other: &QfMat) -> Result<QfMat> {
        if self.src != other.src {
            return Err(Error::Shape("hstack needs a common source".into()));
        }
        let dst = self.dst.concat(&other.dst);
        let entries = (0..self.src.len())
            .flat_map(|i| {
                (0..self.dst.len()).map(move |j| self.get(i, j).clone()).chain((0..other.dst.len()).map(move |j| other.get(i, j).clone()))
            })
            .collect();
        Ok(QfMat { src: self.src.clone(), dst, entries })
    }

    /// `[self ; other]`, sharing the target.
    pub fn vstack(&self, other: &QfMat) -> Result<QfMat> {
        if self.dst != other.dst {
            return Err(Error::Shape("vstack needs a common target".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(QfMat { src: self.src.concat(&other.src), dst: self.dst.clone(), entries })
    }

    pub fn scale(&self, c: &Rational) -> QfMat {
        QfMat { src: self.src.clone(), dst: self.dst.clone(), entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    pub fn add(&self, other: &QfMat) -> Result<QfMat> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Shape("adding block matrices of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(QfMat { src: self.src.clone(), dst: self.dst.clone(), entries })
    }

    /// Block product `self · other` (self first).
    pub fn mul(&self, other: &QfMat) -> Result<QfMat> {
        if self.dst != other.src {
            return Err(Error::Shape(format!("cannot multiply {} → {} by {} → {}", self.src, self.dst, other.src, other.dst)));
        }
        let mut out = QfMat::zero(self.src.clone(), other.dst.clone());
        for i in 0..self.src.len() {
            for k in 0..other.dst.len() {
                let mut acc = LinComb::zero(self.src.sizes[i], other.dst.sizes[k]);
                for j in 0..self.dst.len() {
                    let (a, b) = (self.get(i, j), other.get(j, k));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.compose(b)?)?;
                    }
                }
                out.set(i, k, acc);
            }
        }
        Ok(out)
    }

    /// `self · v` for `v ∈ ℚ𝓕(dst, [n])`, giving a vector in `ℚ𝓕(src, [n])`.
    pub fn apply(&self, n: usize, v: &SparseVec) -> SparseVec {
        let src_off = self.src.offsets_at(n);
        let dst_off = self.dst.offsets_at(n);
        let mut pairs = Vec::new();
        let mut hv = Vec::new();
        for (idx, c) in v.iter() {
            let j = dst_off.partition_point(|&o| o <= idx) - 1;
            decode(idx - dst_off[j], self.dst.sizes[j], n, &mut hv);
            for i in 0..self.src.len() {
                for (t, a) in self.get(i, j).terms() {
                    pairs.push((src_off[i] + compose_index(t, &hv, n), a * c));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// The evaluation column for the basis element `h: [y_j] → [n]` of `ℚ𝓕(dst, [n])`.
    pub fn basis_image(&self, n: usize, j: usize, h_index: usize, src_off: &[usize], scratch: &mut Vec<u32>) -> SparseVec {
        decode(h_index, self.dst.sizes[j], n, scratch);
        let mut pairs = Vec::new();
        for i in 0..self.src.len() {
            for (t, a) in self.get(i, j).terms() {
                pairs.push((src_off[i] + compose_index(t, scratch, n), a.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// All evaluation columns at `[n]`, in basis order of `ℚ𝓕(dst, [n])`.
    pub fn columns_at(&self, n: usize) -> impl Iterator<Item = SparseVec> + '_ {
        let src_off = self.src.offsets_at(n);
        let mut scratch = Vec::new();
        (0..self.dst.len())
            .flat_map(move |j| (0..pow(n, self.dst.sizes[j])).map(move |h| (j, h)))
            .map(move |(j, h)| self.basis_image(n, j, h, &src_off, &mut scratch))
    }
}

impl fmt::Display for QfMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.src.len())
            .map(|i| (0..self.dst.len()).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(" , "))
            .collect();
        write!(f, "[[ {} ]]", rows.join(" ; "))
    }
}

impl fmt::Debug for QfMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} = {self}", self.src, self.dst)
    }
}

pub fn qf_mul(a: &QfMat, b: &QfMat) -> Result<QfMat> {
    a.mul(b)
}

pub fn qf_identity(x: &ObjList) -> QfMat {
    QfMat::identity(x)
}

/// Block-diagonal sum `A ⊕ B`.
pub fn qf_direct_sum(a: &QfMat, b: &QfMat) -> QfMat {
    let src = a.src.concat(&b.src);
    let dst = a.dst.concat(&b.dst);
    let mut m = QfMat::zero(src, dst);
    for i in 0..a.src.len() {
        for j in 0..a.dst.len() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.src.len() {
        for j in 0..b.dst.len() {
            m.set(a.src.len() + i, a.dst.len() + j, b.get(i, j).clone());
        }
    }
    m
}

/// Writes the values of the basis function with index `idx` of `[p] → [n]` into `out`.
pub(crate) fn decode(mut idx: usize, p: usize, n: usize, out: &mut Vec<u32>) {
    out.clear();
    out.resize(p, 0);
    for slot in out.iter_mut().rev() {
        *slot = (idx % n) as u32;
        idx /= n;
    }
}

/// Index of `t·h` where `h` is given by its (zero-based) values into `[n]`.
pub(crate) fn compose_index(t: &FinFn, h: &[u32], n: usize) -> usize {
    t.raw().iter().fold(0usize, |acc, &x| acc * n + h[x as usize] as usize)
}

/// Matrix of `h ↦ v·h` from `ℚ𝓕([q],[n])` to `ℚ𝓕([p],[n])`.
pub fn precomposition_matrix(v: &LinComb, n: usize) -> QMatrix {
    let m = QfMat::diag(vec![v.clone()]);
    let cols: Vec<SparseVec> = m.columns_at(n).collect();
    QMatrix::from_sparse_columns(pow(n, v.dom()), &cols)
}

/// `v·σ` for `v ∈ ℚ𝓕(x, [m])` and `σ: [m] → [m']`, blockwise over `x`.
pub fn postcompose(x: &ObjList, v: &SparseVec, m: usize, sigma: &LinComb) -> SparseVec {
    debug_assert_eq!(sigma.dom(), m);
    let from = x.offsets_at(m);
    let to = x.offsets_at(sigma.cod());
    let mut pairs = Vec::new();
    let mut hv = Vec::new();
    for (idx, c) in v.iter() {
        let b = from.partition_point(|&o| o <= idx) - 1;
        decode(idx - from[b], x.sizes()[b], m, &mut hv);
        for (t, a) in sigma.terms() {
            let img = hv.iter().fold(0usize, |acc, &y| acc * sigma.cod() + t.raw()[y as usize] as usize);
            pairs.push((to[b] + img, a * c));
        }
    }
    SparseVec::from_pairs(pairs)
}

/// `v·φ` for a single function `φ: [m] → [m']`.
pub fn postcompose_fn(x: &ObjList, v: &SparseVec, m: usize, phi: &FinFn) -> SparseVec {
    postcompose(x, v, m, &LinComb::from_fn(phi.clone()))
}

/// Matrix of `h ↦ h·σ` on `ℚ𝓕([p],[m])`, landing in `ℚ𝓕([p],[m'])`.
pub fn postcomposition_matrix(sigma: &LinComb, p: usize) -> QMatrix {
    let x = ObjList::single(p);
    let m = sigma.dom();
    let cols: Vec<SparseVec> = (0..pow(m, p)).map(|i| postcompose(&x, &SparseVec::unit(i), m, sigma)).collect();
    QMatrix::from_sparse_columns(pow(sigma.cod(), p), &cols)
}

/// Evaluation of a block matrix at `[n]`: rows `Σ n^{x_i}`, columns `Σ n^{y_j}`.
pub fn qfmat_eval(a: &QfMat, n: usize) -> QMatrix {
    let cols: Vec<SparseVec> = a.columns_at(n).collect();
    QMatrix::from_sparse_columns(a.src.dim_at(n), &cols)
}

/// Splits a vector of `ℚ𝓕(x, [n])` into one combination per component.
pub fn vector_to_column(x: &ObjList, n: usize, v: &SparseVec) -> Vec<LinComb> {
    let off = x.offsets_at(n);
    x.sizes().iter().enumerate().map(|(i, &a)| LinComb::from_sparse(a, n, &v.window(off[i], off[i + 1]))).collect()
}

/// Inverse of [`vector_to_column`].
pub fn column_to_vector(x: &ObjList, n: usize, col: &[LinComb]) -> SparseVec {
    let off = x.offsets_at(n);
    SparseVec::from_pairs(
        col.iter().enumerate().flat_map(|(i, lc)| { let o = off[i]; lc.terms().map(move |(f, c)| (o + f.index(), c.clone())) }).collect::<Vec<_>>(),
    )
}

/// Every function `[p] → [q]` with coefficient 1, as combinations.
pub fn basis_lincombs(p: usize, q: usize) -> Vec<LinComb> {
    enumerate_functions(p, q).into_iter().map(LinComb::from_fn).collect()
}

/// The pair merges `[k] → [k−1]` as combinations; they generate the
/// non-injective part of `ℚ𝓕([k], −)`.
pub fn pair_merge_lincombs(k: usize) -> Vec<LinComb> {
    finset::pair_merges(k).into_iter().map(LinComb::from_fn).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::partitions_of;
    use crate::linalg::qr;

    fn lc(s: &str, dom: usize, cod: usize) -> LinComb {
        LinComb::parse(s, dom, cod).unwrap()
    }

    #[test]
    fn partial_two_matches_display() {
        let expect = lc("23 - 32 - 13 + 31 + 12 - 21", 2, 3).scale(&qr(1, 6));
        assert_eq!(partial(2), expect);
        let via = epsilon(2).compose(&inclusion(2)).unwrap().compose(&epsilon(3)).unwrap();
        assert_eq!(via, expect);
        assert_eq!(partial(0), LinComb::from_fn(FinFn::parse("()", 1).unwrap()));
    }

    #[test]
    fn partials_square_to_zero() {
        for k in 0..=4 {
            assert!(partial(k).compose(&partial(k + 1)).unwrap().is_zero(), "k = {k}");
        }
    }

    #[test]
    fn idempotents() {
        assert_eq!(epsilon(1), LinComb::identity(1));
        assert_eq!(tau(1), LinComb::identity(1));
        assert_eq!(epsilon(0), LinComb::identity(0));
        assert_eq!(epsilon(2), lc("12 - 21", 2, 2).scale(&qr(1, 2)));
        for k in 2..=3 {
            assert!(tau(k).is_idempotent());
            assert!(epsilon(k).is_idempotent());
            assert!(tau(k).compose(&epsilon(k)).unwrap().is_zero());
        }
    }

    #[test]
    fn young_symmetrizers() {
        for k in 0..=4 {
            assert_eq!(young_symmetrizer(&Partition::row(k)), tau(k));
            assert_eq!(young_symmetrizer(&Partition::column(k)), epsilon(k));
            for lam in partitions_of(k) {
                assert!(young_symmetrizer(&lam).is_idempotent(), "{lam}");
            }
        }
        let display = lc(
            "1234 + 1243 - 1423 - 1432 + 2134 + 2143 - 2314 - 2341 - 3214 - 3241 + 3412 + 3421 - 4123 - 4132 + 4312 + 4321",
            4,
            4,
        );
        assert_eq!(young_symmetrizer(&Partition::new(vec![2, 2]).unwrap()), display.scale(&qr(1, 12)));
    }

    #[test]
    fn lincomb_text_round_trip() {
        let r = lc("11 + 22 + 33 - 3*12 + 3*13 - 3*23", 2, 3);
        assert_eq!(r.len(), 6);
        assert_eq!(r.coeff(&FinFn::parse("12", 3).unwrap()), q(-3));
        assert_eq!(lc(&r.to_string(), 2, 3), r);
        let s = lc("1/2*13 - (1/6)*12 + 0", 2, 3);
        assert_eq!(s.coeff(&FinFn::parse("12", 3).unwrap()), qr(-1, 6));
        assert_eq!(lc(&s.to_string(), 2, 3), s);
        assert!(lc("0", 2, 2).is_zero());
        assert_eq!(lc("-12 + 12", 2, 2).to_string(), "0");
        assert!(LinComb::parse("12 +", 2, 2).is_err());
        assert!(LinComb::parse("123", 2, 3).is_err());
        assert!(LinComb::parse("1/0*12", 2, 2).is_err());
    }

    #[test]
    fn compose_with_zero_and_identity() {
        let v = lc("12 - 3*21", 2, 2);
        assert!(v.compose(&LinComb::zero(2, 3)).unwrap().is_zero());
        assert_eq!(LinComb::identity(2).compose(&v).unwrap(), v);
        assert!(v.compose(&LinComb::identity(3)).is_err());
    }

    #[test]
    fn idempotent_split_is_diagonal() {
        let pi = epsilon(2);
        let one_minus = LinComb::identity(2).sub(&pi).unwrap();
        let x = ObjList::single(2);
        let xx = ObjList::new(vec![2, 2]);
        let left = QfMat::new(xx.clone(), x.clone(), vec![pi.clone(), one_minus.clone()]).unwrap();
        let mid = QfMat::identity(&x);
        let right = QfMat::new(x, xx, vec![pi.clone(), one_minus.clone()]).unwrap();
        let prod = left.mul(&mid).unwrap().mul(&right).unwrap();
        assert_eq!(prod, QfMat::diag(vec![pi, one_minus]));
    }

    #[test]
    fn precomposition_examples() {
        assert_eq!(precomposition_matrix(&LinComb::identity(2), 3), QMatrix::identity(9));
        let m = precomposition_matrix(&lc("11", 2, 1), 2);
        assert_eq!((m.rows(), m.cols()), (4, 2));
        assert_eq!(m.sparse_column(0), SparseVec::unit(0));
        assert_eq!(m.sparse_column(1), SparseVec::unit(3));
        assert_eq!(precomposition_matrix(&partial(1), 2).rank(), 1);
    }

    #[test]
    fn postcomposition_traces() {
        let swap = lc("21", 2, 2);
        assert_eq!(postcomposition_matrix(&LinComb::identity(3), 2), QMatrix::identity(9));
        assert_eq!(postcomposition_matrix(&swap, 2).trace(), q(0));
        assert_eq!(postcomposition_matrix(&swap, 1).trace(), q(0));
        for s in enumerate_permutations(3) {
            let a1 = s.fixed_point_counts(1).unwrap()[0];
            for p in 0..=3 {
                let t = postcomposition_matrix(&LinComb::from_fn(s.clone()), p).trace();
                assert_eq!(t, q(pow(a1, p) as i64));
            }
        }
    }

    fn small_fixtures() -> Vec<QfMat> {
        let x = ObjList::new(vec![1, 2]);
        let y = ObjList::new(vec![2]);
        let z = ObjList::new(vec![3, 0]);
        vec![
            QfMat::new(x.clone(), y.clone(), vec![lc("1 - 2*2", 1, 2), lc("21 + 1/3*12", 2, 2)]).unwrap(),
            QfMat::new(y.clone(), z.clone(), vec![lc("13 - 2*21 + 33", 2, 3), LinComb::zero(2, 0)]).unwrap(),
            QfMat::new(y.clone(), y, vec![epsilon(2)]).unwrap(),
        ]
    }

    #[test]
    fn evaluation_is_functorial() {
        let fx = small_fixtures();
        let (a, b) = (&fx[0], &fx[1]);
        let ab = a.mul(b).unwrap();
        for n in 0..=3 {
            let lhs = qfmat_eval(&ab, n);
            let rhs = qfmat_eval(a, n).mul(&qfmat_eval(b, n)).unwrap();
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn block_product_is_associative() {
        let fx = small_fixtures();
        let e = &fx[2];
        let left = fx[0].mul(e).unwrap().mul(&fx[1]).unwrap();
        let right = fx[0].mul(&e.mul(&fx[1]).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(fx[0].mul(&QfMat::identity(fx[0].dst())).unwrap(), fx[0]);
    }

    #[test]
    fn pre_and_post_commute() {
        let v = lc("112 - 3*211 + 1/2*123", 3, 3);
        for n in 1..=3 {
            for s in enumerate_permutations(n) {
                let s = LinComb::from_fn(s);
                let pre_q = precomposition_matrix(&v, n);
                let lhs = postcomposition_matrix(&s, 3).mul(&pre_q).unwrap();
                let rhs = pre_q.mul(&postcomposition_matrix(&s, 3)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn zero_object_evaluation() {
        let m = QfMat::zero(ObjList::zero(), ObjList::single(2));
        let e = qfmat_eval(&m, 3);
        assert_eq!((e.rows(), e.cols()), (0, 9));
    }

    #[test]
    fn sparse_apply_matches_dense() {
        let a = &small_fixtures()[0];
        for n in 0..=3 {
            let dense = qfmat_eval(a, n);
            for j in 0..dense.cols() {
                let v = SparseVec::unit(j).add(&SparseVec::unit(0).scale(&q(2)));
                let expect = SparseVec::from_dense(&dense.mul_vec(&v.to_dense(dense.cols())));
                assert_eq!(a.apply(n, &v), expect);
            }
        }
    }
}
