//! Presentations `V = ⟨f⟩/⟨fg⟩`, the text format that describes them, and
//! the named families available as `builtin:` URIs.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::finset::{partitions_of, Partition};
use crate::qf::{epsilon, pair_merge_lincombs, partial, tau, young_symmetrizer, LinComb, ObjList, QfMat};

/// A composable pair `f: X → Y`, `g: Y → Z` presenting `⟨f⟩/⟨fg⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub f: QfMat,
    pub g: QfMat,
}

impl Presentation {
    pub fn new(name: impl Into<String>, f: QfMat, g: QfMat) -> Result<Self> {
        if f.dst() != g.src() {
            return Err(Error::Shape(format!("f ends at {} but g starts at {}", f.dst(), g.src())));
        }
        Ok(Presentation { name: name.into(), f, g })
    }

    /// `⟨f⟩` with no relations.
    pub fn imrep(name: impl Into<String>, f: QfMat) -> Self {
        let g = QfMat::zero(f.dst().clone(), ObjList::zero());
        Presentation { name: name.into(), f, g }
    }

    /// `⟨Y⟩ / ⟨g⟩`, a quotient of the representable on `Y`.
    pub fn quotient_of_free(name: impl Into<String>, g: QfMat) -> Self {
        let f = QfMat::identity(g.src());
        Presentation { name: name.into(), f, g }
    }

    pub fn x(&self) -> &ObjList {
        self.f.src()
    }

    pub fn y(&self) -> &ObjList {
        self.f.dst()
    }

    pub fn z(&self) -> &ObjList {
        self.g.dst()
    }

    /// The relation matrix `f·g: X → Z`.
    pub fn relations(&self) -> QfMat {
        self.f.mul(&self.g).expect("f and g are composable")
    }

    pub fn degree_bound(&self) -> usize {
        degree_bound(self)
    }

    /// Text that [`parse_presentation`] reads back to an equal value.
    pub fn serialize(&self) -> String {
        serialize(self)
    }
}

pub fn degree_bound(p: &Presentation) -> usize {
    p.y().max_size()
}

/// The named families reachable through `builtin:` URIs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Tensor(usize),
    Lambda(usize),
    Sym(usize),
    Theta(usize),
    Schur(Partition),
    D(usize),
    C(Partition),
    D0,
}

impl Builtin {
    /// Parses the part after `builtin:`, e.g. `tensor/3`, `p/2,1`, `d0`.
    pub fn parse(spec: &str) -> Result<Builtin> {
        let bad = |m: &str| Error::Invalid(format!("builtin `{spec}`: {m}"));
        if spec == "d0" {
            return Ok(Builtin::D0);
        }
        let (kind, arg) = spec.split_once('/').ok_or_else(|| bad("expected kind/argument"))?;
        let int = || arg.trim().parse::<usize>().map_err(|_| bad("expected a natural number"));
        let part = || if arg.trim().is_empty() { Ok(Partition::empty()) } else { Partition::parse(arg) };
        Ok(match kind {
            "tensor" => Builtin::Tensor(int()?),
            "lambda" => Builtin::Lambda(int()?),
            "s" => Builtin::Sym(int()?),
            "theta" => Builtin::Theta(int()?),
            "p" => Builtin::Schur(part()?),
            "c" => Builtin::C(part()?),
            "d" => {
                let k = int()?;
                if k == 0 {
                    return Err(bad("d/k needs k ≥ 1; use builtin:d0"));
                }
                Builtin::D(k)
            }
            _ => return Err(bad("unknown kind")),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Tensor(k) => format!("tensor_{k}"),
            Builtin::Lambda(k) => format!("lambda_{k}"),
            Builtin::Sym(k) => format!("s_{k}"),
            Builtin::Theta(k) => format!("theta_{k}"),
            Builtin::Schur(l) => format!("p_{}", l.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")),
            Builtin::D(k) => format!("d_{k}"),
            Builtin::C(l) => format!("c_{}", l.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")),
            Builtin::D0 => "d0".to_string(),
        }
    }
}

fn single(e: LinComb) -> QfMat {
    QfMat::diag(vec![e])
}

pub fn builtin_presentation(kind: &Builtin) -> Presentation {
    let name = kind.name();
    match kind {
        Builtin::Tensor(k) => Presentation::imrep(name, single(LinComb::identity(*k))),
        Builtin::Lambda(k) => Presentation::imrep(name, single(epsilon(*k))),
        Builtin::Sym(k) => Presentation::imrep(name, single(tau(*k))),
        Builtin::Theta(k) => {
            let e = LinComb::identity(*k).sub(&epsilon(*k)).expect("same interface");
            Presentation::imrep(name, single(e))
        }
        Builtin::Schur(l) => Presentation::imrep(name, single(young_symmetrizer(l))),
        Builtin::D(k) => Presentation::imrep(name, single(partial(k - 1))),
        Builtin::C(l) => c_lambda(l),
        Builtin::D0 => {
            let f = QfMat::identity(&ObjList::single(0));
            let g = single(LinComb::from_fn(crate::finset::FinFn::inclusion(0)));
            Presentation::new(name, f, g).expect("composable")
        }
    }
}

/// `⟨c_λ, s_1, …, s_m⟩ / ⟨s_1, …, s_m⟩` with the `s_i` the pair merges.
fn c_lambda(l: &Partition) -> Presentation {
    let k = l.size();
    let merges = pair_merge_lincombs(k);
    let m = merges.len();
    let x = ObjList::single(k);
    let mut y_sizes = vec![k];
    y_sizes.extend(std::iter::repeat_n(k.saturating_sub(1), m));
    let y = ObjList::new(y_sizes);
    let mut entries = vec![young_symmetrizer(l)];
    entries.extend(merges);
    let f = QfMat::new(x, y.clone(), entries).expect("interfaces match");
    let z = ObjList::new(vec![k.saturating_sub(1); m]);
    let mut g = QfMat::zero(y, z);
    for i in 0..m {
        g.set(i + 1, i, LinComb::identity(k - 1));
    }
    Presentation::new(Builtin::C(l.clone()).name(), f, g).expect("composable")
}

/// Every builtin of degree at most `k`, for sweeping tests.
pub fn builtins_up_to(k: usize) -> Vec<Builtin> {
    let mut out = vec![Builtin::D0];
    for j in 0..=k {
        out.push(Builtin::Tensor(j));
        out.push(Builtin::Lambda(j));
        out.push(Builtin::Sym(j));
        out.push(Builtin::Theta(j));
        if j >= 1 {
            out.push(Builtin::D(j));
        }
        for l in partitions_of(j) {
            out.push(Builtin::Schur(l.clone()));
            out.push(Builtin::C(l));
        }
    }
    out
}

/// Loads `builtin:…` URIs or parses presentation text.
pub fn load(source: &str) -> Result<Presentation> {
    match source.strip_prefix("builtin:") {
        Some(spec) => Ok(builtin_presentation(&Builtin::parse(spec)?)),
        None => parse_presentation(source),
    }
}

// ---------------------------------------------------------------------------
// text format

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0) + 1;
        (line, col)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        let (line, col) = self.location(pos);
        Error::parse(line, col, msg)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos, msg)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let t = r.trim_start();
            self.pos += r.len() - t.len();
            if t.starts_with('#') {
                self.pos += t.find('\n').unwrap_or(t.len());
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    fn ident(&mut self) -> Result<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.rest().chars().take_while(|c| c.is_alphanumeric() || *c == '_').map(char::len_utf8).sum();
        if len == 0 || self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok((start, self.src[start..self.pos].to_string()))
    }

    fn natural(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self.rest().chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected a natural number"));
        }
        let v = self.rest()[..len].parse().map_err(|_| self.err("number too large"))?;
        self.pos += len;
        Ok(v)
    }

    /// Everything up to the closing `]]`, with the position where it starts.
    fn matrix_body(&mut self) -> Result<(usize, &'a str)> {
        self.expect("[[")?;
        let start = self.pos;
        let end = self.rest().find("]]").ok_or_else(|| self.err_at(start, "unterminated matrix, expected `]]`"))?;
        self.pos += end + 2;
        Ok((start, &self.src[start..start + end]))
    }
}

fn parse_objexpr(c: &mut Cursor) -> Result<ObjList> {
    c.skip_ws();
    if c.rest().starts_with('0') {
        c.pos += 1;
        return Ok(ObjList::zero());
    }
    let mut sizes = Vec::new();
    loop {
        c.expect("[")?;
        sizes.push(c.natural()?);
        c.expect("]")?;
        if !c.eat("(+)") {
            break;
        }
    }
    Ok(ObjList::new(sizes))
}

fn parse_objref(c: &mut Cursor, objects: &HashMap<String, ObjList>) -> Result<ObjList> {
    c.skip_ws();
    if c.rest().starts_with('[') || c.rest().starts_with('0') {
        return parse_objexpr(c);
    }
    let (pos, name) = c.ident()?;
    objects.get(&name).cloned().ok_or_else(|| c.err_at(pos, format!("unknown object `{name}`")))
}

/// Splits at `sep` outside parentheses, keeping each piece's byte offset.
fn split_top(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

fn parse_matrix(c: &Cursor, body_pos: usize, body: &str, src: &ObjList, dst: &ObjList) -> Result<QfMat> {
    if body.trim().is_empty() {
        if src.is_empty() || dst.is_empty() {
            return Ok(QfMat::zero(src.clone(), dst.clone()));
        }
        return Err(c.err_at(body_pos, format!("empty matrix for a map {src} -> {dst}")));
    }
    let rows = split_top(body, ';');
    if rows.len() != src.len() {
        return Err(c.err_at(body_pos, format!("{} rows given, the source {src} needs {}", rows.len(), src.len())));
    }
    let mut entries = Vec::with_capacity(src.len() * dst.len());
    for (i, (roff, row)) in rows.into_iter().enumerate() {
        let cells = split_top(row, ',');
        if cells.len() != dst.len() {
            return Err(c.err_at(
                body_pos + roff,
                format!("row {} has {} entries, the target {dst} needs {}", i + 1, cells.len(), dst.len()),
            ));
        }
        for (j, (eoff, cell)) in cells.into_iter().enumerate() {
            let lead = cell.len() - cell.trim_start().len();
            let at = body_pos + roff + eoff + lead;
            let lc = LinComb::parse(cell, src.sizes()[i], dst.sizes()[j]).map_err(|e| {
                let msg = match e {
                    Error::Invalid(m) | Error::Shape(m) => m,
                    other => other.to_string(),
                };
                c.err_at(at, format!("entry ({}, {}): {msg}", i + 1, j + 1))
            })?;
            entries.push(lc);
        }
    }
    QfMat::new(src.clone(), dst.clone(), entries).map_err(|e| c.err_at(body_pos, e.to_string()))
}

enum Bracket {
    Map(String),
    Object(String),
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut c = Cursor { src: text, pos: 0 };
    let mut objects: HashMap<String, ObjList> = HashMap::new();
    let mut maps: HashMap<String, QfMat> = HashMap::new();
    let mut result: Option<Presentation> = None;

    while !c.at_end() {
        let (kpos, kw) = c.ident()?;
        match kw.as_str() {
            "object" => {
                let (_, name) = c.ident()?;
                c.expect("=")?;
                let obj = parse_objexpr(&mut c)?;
                objects.insert(name, obj);
            }
            "map" => {
                let (_, name) = c.ident()?;
                c.expect(":")?;
                let src = parse_objref(&mut c, &objects)?;
                c.expect("->")?;
                let dst = parse_objref(&mut c, &objects)?;
                c.expect("=")?;
                let (bpos, body) = c.matrix_body()?;
                let m = parse_matrix(&c, bpos, body, &src, &dst)?;
                maps.insert(name, m);
            }
            "present" => {
                if result.is_some() {
                    return Err(c.err_at(kpos, "only one `present` statement is allowed"));
                }
                let (_, name) = c.ident()?;
                c.expect("=")?;
                let num = parse_angle(&mut c)?;
                let den = if c.eat("/") { parse_angle(&mut c)? } else { Vec::new() };
                result = Some(assemble(&c, kpos, name, num, den, &objects, &maps)?);
            }
            other => return Err(c.err_at(kpos, format!("unknown statement `{other}`"))),
        }
    }
    result.ok_or_else(|| c.err("missing `present` statement"))
}

fn parse_angle(c: &mut Cursor) -> Result<Vec<(usize, String)>> {
    c.expect("<")?;
    let mut names = Vec::new();
    while !c.eat(">") {
        if c.at_end() {
            return Err(c.err("expected `>`"));
        }
        names.push(c.ident()?);
    }
    Ok(names)
}

fn assemble(
    c: &Cursor,
    pos: usize,
    name: String,
    num: Vec<(usize, String)>,
    den: Vec<(usize, String)>,
    objects: &HashMap<String, ObjList>,
    maps: &HashMap<String, QfMat>,
) -> Result<Presentation> {
    let resolve = |(p, n): &(usize, String)| -> Result<Bracket> {
        if maps.contains_key(n) {
            Ok(Bracket::Map(n.clone()))
        } else if objects.contains_key(n) {
            Ok(Bracket::Object(n.clone()))
        } else {
            Err(c.err_at(*p, format!("unknown map or object `{n}`")))
        }
    };
    if num.len() != 1 {
        return Err(c.err_at(pos, "the numerator must name exactly one map or object"));
    }
    let f = match resolve(&num[0])? {
        Bracket::Map(m) => maps[&m].clone(),
        Bracket::Object(o) => QfMat::identity(&objects[&o]),
    };
    let g_name = match den.len() {
        0 => None,
        1 if matches!(resolve(&num[0])?, Bracket::Object(_)) => Some(&den[0]),
        2 if den[0].1 == num[0].1 => Some(&den[1]),
        _ => {
            let p = den.first().map(|d| d.0).unwrap_or(pos);
            return Err(c.err_at(p, format!("the denominator must be `<{0} g>` (or `<g>` when `{0}` is an object)", num[0].1)));
        }
    };
    let g = match g_name {
        None => QfMat::zero(f.dst().clone(), ObjList::zero()),
        Some(gn) => match resolve(gn)? {
            Bracket::Map(m) => maps[&m].clone(),
            Bracket::Object(_) => return Err(c.err_at(gn.0, format!("`{}` is an object, expected a map", gn.1))),
        },
    };
    Presentation::new(name, f, g).map_err(|e| c.err_at(pos, e.to_string()))
}

fn write_matrix(out: &mut String, m: &QfMat) {
    if m.src().is_empty() || m.dst().is_empty() {
        out.push_str("[[ ]]");
        return;
    }
    let rows: Vec<String> = (0..m.src().len())
        .map(|i| (0..m.dst().len()).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>().join(" , "))
        .collect();
    let _ = write!(out, "[[ {} ]]", rows.join(" ;\n     "));
}

pub fn serialize(p: &Presentation) -> String {
    let mut out = String::new();
    let name = if p.name.is_empty() { "V" } else { &p.name };
    let _ = writeln!(out, "object X = {}", p.x());
    let _ = writeln!(out, "object Y = {}", p.y());
    let _ = writeln!(out, "object Z = {}", p.z());
    out.push_str("map f : X -> Y = ");
    write_matrix(&mut out, &p.f);
    out.push('\n');
    out.push_str("map g : Y -> Z = ");
    write_matrix(&mut out, &p.g);
    out.push('\n');
    let _ = writeln!(out, "present {name} = <f> / <f g>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinFn;

    const INTRO: &str = "\
# x_i ⊗ x_j modulo the cubic relation
object Y = [2]
map g : Y -> [3] = [[ 11 + 22 + 33 - 3*12 + 3*13 - 3*23 ]]
present V = <Y> / <g>
";

    #[test]
    fn intro_text() {
        let p = parse_presentation(INTRO).unwrap();
        assert_eq!(p.name, "V");
        assert!(p.f.is_identity());
        assert_eq!(p.f.get(0, 0), &LinComb::from_fn(FinFn::parse("12", 2).unwrap()));
        assert_eq!(p.g.get(0, 0), &LinComb::parse("11 + 22 + 33 - 3*12 + 3*13 - 3*23", 2, 3).unwrap());
        assert_eq!(degree_bound(&p), 2);
        assert_eq!(parse_presentation(&p.serialize()).unwrap(), p);
    }

    #[test]
    fn explicit_f_and_multi_line_matrix() {
        let text = "object X = [2]\nobject Y = [2] (+) [1]\nmap f : X -> Y = [[ 12 ,\n  1/2*11 ]]\nmap g : Y -> [1] = [[ 11 ; 1 ]]\npresent W = <f> / <f g>\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.y(), &ObjList::new(vec![2, 1]));
        assert_eq!(p.z(), &ObjList::single(1));
        assert_eq!(parse_presentation(&p.serialize()).unwrap(), p);
    }

    #[test]
    fn empty_relations() {
        for text in ["map f : [1] -> [2] = [[ 2 - 1 ]]\npresent A = <f>\n", "map f : [1] -> [2] = [[ 2 ]]\npresent A = <f> / <>\n"] {
            let p = parse_presentation(text).unwrap();
            assert!(p.z().is_empty());
            assert_eq!(parse_presentation(&p.serialize()).unwrap(), p);
        }
    }

    #[test]
    fn c4_fixture() {
        let p = builtin_presentation(&Builtin::C(Partition::new(vec![2, 2]).unwrap()));
        let expected = ["1123", "1213", "1231", "1223", "1232", "1233"];
        for (j, lit) in expected.iter().enumerate() {
            assert_eq!(p.f.get(0, j + 1), &LinComb::from_fn(FinFn::parse(lit, 3).unwrap()));
        }
        assert_eq!(p.g.dst().len(), 6);
        assert_eq!(parse_presentation(&p.serialize()).unwrap(), p);
    }

    #[test]
    fn error_positions() {
        let e = parse_presentation("object Y = [2]\nmap g : Y -> [3] = [[ 11 + 14 ]]\npresent V = <Y> / <g>").unwrap_err();
        match e {
            Error::Parse { line, col, .. } => assert_eq!((line, col), (2, 23)),
            other => panic!("{other:?}"),
        }
        let e = parse_presentation("object Y = [2]\n  bogus").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 3, .. }), "{e:?}");
        let e = parse_presentation("map f : [1] -> [2] = [[ 12 , 11 ]]\npresent A = <f>").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        assert!(parse_presentation("object Y = [2]").is_err());
        assert!(parse_presentation("map f : [1] -> [2] = [[ 1 ]]\npresent A = <f> / <g>").is_err());
    }

    #[test]
    fn builtin_uris() {
        assert_eq!(load("builtin:tensor/3").unwrap().name, "tensor_3");
        assert_eq!(Builtin::parse("p/2,1").unwrap(), Builtin::Schur(Partition::new(vec![2, 1]).unwrap()));
        assert_eq!(Builtin::parse("d0").unwrap(), Builtin::D0);
        assert!(Builtin::parse("d/0").is_err());
        assert!(Builtin::parse("q/1").is_err());
        let d2 = builtin_presentation(&Builtin::D(2));
        assert_eq!(d2.f.get(0, 0), &partial(1));
        let l2 = builtin_presentation(&Builtin::Lambda(2));
        assert_eq!(l2.f.get(0, 0), &epsilon(2));
        assert!(l2.z().is_empty());
        for b in builtins_up_to(3) {
            let p = builtin_presentation(&b);
            assert_eq!(parse_presentation(&p.serialize()).unwrap(), p, "{b:?}");
        }
    }
}
