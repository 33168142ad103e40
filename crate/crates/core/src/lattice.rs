//! Integral lattices given by Gram matrices, the standard root lattices,
//! and sublattices embedded in an ambient lattice by explicit coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::{
    determinant, hermite_normal_form, int, integer_kernel, saturate, signature, IntegerMatrix,
    Signature,
};

/// A free abelian group with an integral symmetric bilinear form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    gram: IntegerMatrix,
    label: String,
}

impl Lattice {
    pub fn new(gram: IntegerMatrix, label: impl Into<String>) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Shape("Gram matrix must be square and symmetric".into()));
        }
        Ok(Self { gram, label: label.into() })
    }

    pub fn from_i64(gram: &[Vec<i64>], label: impl Into<String>) -> Result<Self> {
        Self::new(IntegerMatrix::from_i64(gram), label)
    }

    pub fn gram(&self) -> &IntegerMatrix {
        &self.gram
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram).expect("Gram is square")
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram).expect("Gram is symmetric")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs() == int(1)
    }

    /// Even iff every diagonal Gram entry is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn is_negative_definite(&self) -> bool {
        self.signature().is_negative_definite()
    }

    pub fn norm(&self, v: &[BigInt]) -> BigInt {
        self.gram.bilinear(v, v)
    }

    pub fn dot(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        self.gram.bilinear(x, y)
    }

    pub(crate) fn require_nondegenerate(&self, what: &str) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            domain(format!("{what} needs a nondegenerate lattice (det = 0)"))
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_empty() {
            write!(f, "{}", self.gram)
        } else {
            write!(f, "{} {}", self.label, self.gram)
        }
    }
}

/// On-disk form: `{"label": "...", "gram": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
struct LatticeJson {
    label: String,
    gram: Vec<Vec<i64>>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gram = self
            .gram
            .to_i64()
            .ok_or_else(|| serde::ser::Error::custom("Gram entry does not fit in 64 bits"))?;
        LatticeJson { label: self.label.clone(), gram }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LatticeJson::deserialize(d)?;
        let n = raw.gram.len();
        if raw.gram.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("Gram matrix must be square"));
        }
        Lattice::from_i64(&raw.gram, raw.label).map_err(serde::de::Error::custom)
    }
}

fn cartan_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

/// Negative definite `A_p` (roots have square −2).
pub fn root_a(p: usize) -> Result<Lattice> {
    if p < 1 {
        return domain("A_p needs p >= 1");
    }
    let edges: Vec<_> = (1..p).map(|i| (i - 1, i)).collect();
    Lattice::from_i64(&cartan_from_edges(p, &edges), format!("A{p}"))
}

/// Negative definite `D_q`; nodes `0..q-2` form a chain and `q-1` hangs off node `q-3`.
pub fn root_d(q: usize) -> Result<Lattice> {
    if q < 4 {
        return domain("D_q needs q >= 4");
    }
    let mut edges: Vec<_> = (1..q - 1).map(|i| (i - 1, i)).collect();
    edges.push((q - 3, q - 1));
    Lattice::from_i64(&cartan_from_edges(q, &edges), format!("D{q}"))
}

/// Negative definite `E_6`, `E_7`, `E_8` in Bourbaki numbering
/// (chain 1-3-4-5-..., node 2 attached to node 4; zero-based here).
pub fn root_e(n: usize) -> Result<Lattice> {
    if !(6..=8).contains(&n) {
        return domain("E_n needs n in 6..=8");
    }
    let mut edges = vec![(0, 2), (1, 3), (2, 3)];
    edges.extend((3..n - 1).map(|i| (i, i + 1)));
    Lattice::from_i64(&cartan_from_edges(n, &edges), format!("E{n}"))
}

/// The hyperbolic plane `U`.
pub fn hyperbolic_plane() -> Lattice {
    Lattice::from_i64(&[vec![0, 1], vec![1, 0]], "U").expect("symmetric")
}

/// Rank-one lattice `<n>`.
pub fn rank_one(n: i64) -> Lattice {
    Lattice::from_i64(&[vec![n]], format!("<{n}>")).expect("symmetric")
}

/// Looks up a family by letter: `A`, `D`, `E` take a parameter, `U` does not.
pub fn named_lattice(name: &str, parameter: Option<usize>) -> Result<Lattice> {
    match (name, parameter) {
        ("A", Some(p)) => root_a(p),
        ("D", Some(q)) => root_d(q),
        ("E", Some(n)) => root_e(n),
        ("U", None) => Ok(hyperbolic_plane()),
        _ => domain(format!("unknown lattice family {name:?} with parameter {parameter:?}")),
    }
}

/// Multiplies the form by `n`.
pub fn rescale(l: &Lattice, n: i64) -> Result<Lattice> {
    if n == 0 {
        return domain("rescaling by zero");
    }
    let label = if l.label.is_empty() { String::new() } else { format!("{}({n})", l.label) };
    Lattice::new(l.gram.scale(&int(n)), label)
}

/// Orthogonal sum.
pub fn direct_sum(parts: &[Lattice]) -> Lattice {
    let blocks: Vec<&IntegerMatrix> = parts.iter().map(|p| &p.gram).collect();
    let label = parts.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join("+");
    Lattice { gram: IntegerMatrix::block_diag(&blocks), label }
}

/// `n` copies of `l`.
pub fn copies(n: usize, l: &Lattice) -> Lattice {
    let sum = direct_sum(&vec![l.clone(); n]);
    sum.with_label(format!("{n}{}", l.label))
}

/// Parses expressions such as `E8`, `8A2`, `2E8+3U`, `U(2)`, `U2`, `<-4>`, `K3`.
pub fn parse_lattice_expr(expr: &str) -> Result<Lattice> {
    let expr = expr.trim();
    if expr.eq_ignore_ascii_case("K3") {
        return Ok(k3_lattice());
    }
    let mut parts = Vec::new();
    for term in expr.split('+') {
        parts.push(parse_term(term.trim())?);
    }
    let l = if parts.len() == 1 { parts.pop().unwrap() } else { direct_sum(&parts) };
    Ok(l.with_label(expr))
}

fn parse_term(term: &str) -> Result<Lattice> {
    let bad = || Error::Parse(format!("cannot parse lattice term {term:?}"));
    if let Some(inner) = term.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        let n: i64 = inner.trim().parse().map_err(|_| bad())?;
        return Ok(rank_one(n));
    }
    let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
    let mult: usize = if digits == 0 { 1 } else { term[..digits].parse().map_err(|_| bad())? };
    let rest = &term[digits..];
    let mut chars = rest.chars();
    let family = chars.next().ok_or_else(bad)?;
    let tail: &str = chars.as_str();
    let (param_str, scale) = match tail.find('(') {
        Some(i) => {
            let s = tail[i + 1..].strip_suffix(')').ok_or_else(bad)?;
            (&tail[..i], Some(s.trim().parse::<i64>().map_err(|_| bad())?))
        }
        None => (tail, None),
    };
    let base = match family {
        'U' => {
            let mut u = hyperbolic_plane();
            // `U2` is shorthand for `U(2)`
            if !param_str.is_empty() {
                let n: i64 = param_str.parse().map_err(|_| bad())?;
                u = rescale(&u, n)?;
            }
            u
        }
        'A' | 'D' | 'E' => {
            let p: usize = param_str.parse().map_err(|_| bad())?;
            named_lattice(&family.to_string(), Some(p))?
        }
        _ => return Err(bad()),
    };
    let base = match scale {
        Some(n) => rescale(&base, n)?,
        None => base,
    };
    Ok(if mult == 1 { base } else { copies(mult, &base) })
}

/// `2E8 ⊕ 3U`, the even unimodular lattice of rank 22 and signature (3, 19).
pub fn k3_lattice() -> Lattice {
    let e8 = root_e(8).expect("valid");
    let u = hyperbolic_plane();
    direct_sum(&[e8.clone(), e8, u.clone(), u.clone(), u]).with_label("2E8+3U")
}

/// A sublattice given by ambient coordinates of its basis (one row per basis vector).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SublatticeEmbedding {
    ambient: Lattice,
    basis: IntegerMatrix,
}

impl SublatticeEmbedding {
    pub fn new(ambient: Lattice, basis: IntegerMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::Dimension(format!(
                "basis vectors have {} coordinates, ambient rank is {}",
                basis.cols(),
                ambient.rank()
            )));
        }
        if basis.rank() != basis.rows() {
            return domain("sublattice basis rows are linearly dependent");
        }
        Ok(Self { ambient, basis })
    }

    pub fn from_i64(ambient: Lattice, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = ambient.rank();
        let basis = IntegerMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            cols,
        )?;
        Self::new(ambient, basis)
    }

    /// The whole ambient lattice.
    pub fn whole(ambient: Lattice) -> Self {
        let n = ambient.rank();
        Self { ambient, basis: IntegerMatrix::identity(n) }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// `basis · gram · basisᵀ`.
    pub fn induced_gram(&self) -> IntegerMatrix {
        self.basis.mul(self.ambient.gram()).mul(&self.basis.transpose())
    }

    pub fn lattice(&self) -> Lattice {
        Lattice { gram: self.induced_gram(), label: String::new() }
    }

    /// Index of the sublattice in its primitive hull.
    pub fn index_in_hull(&self) -> BigInt {
        let hull = saturate(&self.basis);
        if self.rank() == 0 {
            return int(1);
        }
        // both bases span the same Q-space; compare Gram determinants of the lattices
        // under the standard dot product
        let gs = self.basis.mul(&self.basis.transpose()).determinant().expect("square");
        let gh = hull.mul(&hull.transpose()).determinant().expect("square");
        let ratio = gs / gh;
        ratio.sqrt()
    }

    pub fn is_primitive(&self) -> bool {
        self.index_in_hull() == int(1)
    }

    /// Whether `v` (ambient coordinates) lies in the sublattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let hnf = hermite_normal_form(&self.basis);
        let extended = hnf.vstack(&IntegerMatrix::from_rows(vec![v.to_vec()], v.len()).expect("row"));
        match extended {
            Ok(m) => hermite_normal_form(&m) == hnf,
            Err(_) => false,
        }
    }
}

/// `{x ∈ ambient : x·s = 0 for every s in the sublattice}`; always primitive.
pub fn orthogonal_complement(e: &SublatticeEmbedding) -> Result<SublatticeEmbedding> {
    e.ambient.require_nondegenerate("orthogonal complement")?;
    let constraints = e.basis.mul(e.ambient.gram());
    let basis = if constraints.rows() == 0 {
        IntegerMatrix::identity(e.ambient.rank())
    } else {
        integer_kernel(&constraints)
    };
    Ok(SublatticeEmbedding { ambient: e.ambient.clone(), basis })
}

/// Saturation of the sublattice inside the ambient group, in Hermite form.
pub fn primitive_hull(e: &SublatticeEmbedding) -> Result<SublatticeEmbedding> {
    e.ambient.require_nondegenerate("primitive hull")?;
    let basis = if e.rank() == 0 { e.basis.clone() } else { saturate(&e.basis) };
    Ok(SublatticeEmbedding { ambient: e.ambient.clone(), basis })
}

pub fn is_even(l: &Lattice) -> bool {
    l.is_even()
}

/// Splits the index set of a Gram matrix into connected components of its
/// "nonzero off-diagonal" graph, each component sorted, components ordered by
/// smallest index.
pub(crate) fn orthogonal_blocks(gram: &IntegerMatrix) -> Vec<Vec<usize>> {
    let n = gram.rows();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut stack = vec![s];
        let mut comp = Vec::new();
        seen[s] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in 0..n {
                if !seen[j] && !gram.get(i, j).is_zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        blocks.push(comp);
    }
    blocks
}
