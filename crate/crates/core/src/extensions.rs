//! Finite-index overlattices, roots, quasi-primitivity, gluing along a
//! unimodular lattice and eigenlattices of involutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::discriminant::{discr, fqf_isomorphic, DiscriminantElement, FiniteQuadraticForm, GluingKernel};
use crate::error::{domain, resource, Error, Result};
use crate::exact::{
    fmt_rat, hermite_normal_form, int, integer_kernel, rat_from_int, rat_mod, smith_normal_form,
    IntegerMatrix, RationalMatrix,
};
use crate::lattice::{
    direct_sum, hyperbolic_plane, orthogonal_complement, rank_one, rescale, root_a, Lattice, SublatticeEmbedding,
};
use crate::Limits;

/// `M = {x ∈ L∨ : x mod L ∈ K}` for an isotropic kernel `K ⊂ discr L`.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub base: Lattice,
    pub kernel: GluingKernel,
    pub result: Lattice,
    /// Rows are the basis of `result` in `base ⊗ Q` coordinates (Hermite normalised).
    pub change_of_basis: RationalMatrix,
    /// `|det result| · |K|² = |det base|`.
    pub determinant_law: bool,
    /// `discr result ≅ K⊥/K`; `None` when the groups exceed the isomorphism bound.
    pub discriminant_matches: Option<bool>,
}

impl Overlattice {
    pub fn index(&self) -> u64 {
        self.kernel.order()
    }
}

pub fn overlattice(base: &Lattice, kernel: &GluingKernel, limits: &Limits) -> Result<Overlattice> {
    let d = discr(base)?;
    if *kernel.parent() != d.form {
        return domain("kernel does not live in the discriminant of the base lattice");
    }
    if !kernel.parent().is_isotropic_subgroup(kernel.generators()) {
        return domain("kernel is not isotropic");
    }
    let n = base.rank();
    let mut rows: Vec<Vec<BigRational>> = RationalMatrix::identity(n).row_vecs();
    rows.extend(kernel.generators().iter().map(|g| d.lift(g)));
    let gens = RationalMatrix::from_rows(rows, n)?;
    let den = gens.common_denominator();
    let scaled = IntegerMatrix::from_rows(
        gens.row_vecs()
            .into_iter()
            .map(|r| r.iter().map(|x| (x * rat_from_int(&den)).to_integer()).collect())
            .collect(),
        n,
    )?;
    let hnf = hermite_normal_form(&scaled);
    let basis = RationalMatrix::from_rows(
        hnf.row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
            .collect(),
        n,
    )?;
    let gram_q = basis.mul(&base.gram().to_rational()).mul(&basis.transpose());
    let gram = gram_q.to_integer().ok_or_else(|| Error::Domain("overlattice form is not integral".into()))?;
    let result = Lattice::new(gram, format!("{}~", base.label()))?;
    if !result.is_even() {
        return domain("overlattice is not even");
    }
    let k = BigInt::from(kernel.order());
    let determinant_law = result.determinant().abs() * &k * &k == base.determinant().abs();
    let quotient = kernel.perp_quotient()?;
    let result_form = discr(&result)?.form;
    let discriminant_matches = match fqf_isomorphic(&result_form, &quotient, limits) {
        Ok(w) => Some(w.is_some()),
        Err(Error::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Overlattice {
        base: base.clone(),
        kernel: kernel.clone(),
        result,
        change_of_basis: basis,
        determinant_law,
        discriminant_matches,
    })
}

/// `A = T·D·Tᵀ`-style decomposition used by Fincke–Pohst:
/// `xᵀAx = Σᵢ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²`.
struct QuadraticDecomposition {
    diag: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

fn decompose(a: &IntegerMatrix) -> QuadraticDecomposition {
    let n = a.rows();
    let mut q = a.to_rational().row_vecs();
    for i in 0..n {
        for j in i + 1..n {
            let v = q[i][j].clone();
            q[j][i] = v.clone();
            q[i][j] = v / &q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = &q[k][i] * &q[i][l];
                q[k][l] = &q[k][l] - v;
            }
        }
    }
    QuadraticDecomposition {
        diag: (0..n).map(|i| q[i][i].clone()).collect(),
        mu: (0..n).map(|i| (0..n).map(|j| if j > i { q[i][j].clone() } else { BigRational::zero() }).collect()).collect(),
    }
}

/// `⌊√r⌋` for a nonnegative rational `r`.
fn floor_sqrt(r: &BigRational) -> BigInt {
    let (a, b) = (r.numer(), r.denom());
    (a * b).sqrt() / b
}

/// All `x ∈ Zⁿ` with `xᵀAx = target` for a positive definite integer `A`.
fn vectors_of_norm(a: &IntegerMatrix, target: &BigInt) -> Vec<Vec<BigInt>> {
    let n = a.rows();
    if n == 0 {
        return if target.is_zero() { vec![vec![]] } else { vec![] };
    }
    let dec = decompose(a);

    fn candidates(dec: &QuadraticDecomposition, i: usize, x: &[BigInt], rem: &BigRational) -> Vec<(BigInt, BigRational)> {
        let n = x.len();
        let c: BigRational = (i + 1..n).map(|j| &dec.mu[i][j] * rat_from_int(&x[j])).sum();
        let s = floor_sqrt(&(rem / &dec.diag[i]));
        let lo = (-&c).floor().to_integer() - &s - 1;
        let hi = (-&c).ceil().to_integer() + &s + 1;
        let mut out = Vec::new();
        let mut v = lo;
        while v <= hi {
            let t = rat_from_int(&v) + &c;
            let used = &dec.diag[i] * &t * &t;
            if used <= *rem {
                out.push((v.clone(), rem - used));
            }
            v += 1;
        }
        out
    }

    fn descend(dec: &QuadraticDecomposition, i: usize, x: &mut Vec<BigInt>, rem: BigRational, out: &mut Vec<Vec<BigInt>>) {
        for (v, r) in candidates(dec, i, x, &rem) {
            x[i] = v;
            if i == 0 {
                if r.is_zero() {
                    out.push(x.clone());
                }
            } else {
                descend(dec, i - 1, x, r, out);
            }
        }
        x[i] = BigInt::zero();
    }

    let top = n - 1;
    let start = vec![BigInt::zero(); n];
    let first = candidates(&dec, top, &start, &rat_from_int(target));
    let mut found: Vec<Vec<BigInt>> = first
        .into_par_iter()
        .map(|(v, r)| {
            let mut x = start.clone();
            x[top] = v;
            let mut out = Vec::new();
            if top == 0 {
                if r.is_zero() {
                    out.push(x);
                }
            } else {
                descend(&dec, top - 1, &mut x, r, &mut out);
            }
            out
        })
        .flatten()
        .collect();
    found.sort();
    found
}

/// All vectors of square −2 in a negative definite lattice, as `r, −r`
/// pairs with `r` lexicographically positive, pairs in lexicographic order.
pub fn roots(l: &Lattice, limits: &Limits) -> Result<Vec<Vec<BigInt>>> {
    if l.rank() > limits.root_rank_limit {
        return resource(format!("rank {} exceeds the root enumeration limit {}", l.rank(), limits.root_rank_limit));
    }
    if !l.is_negative_definite() {
        return domain("root enumeration needs a negative definite lattice");
    }
    let all = vectors_of_norm(&l.gram().neg(), &int(2));
    let mut positive: Vec<Vec<BigInt>> = all
        .into_iter()
        .filter(|v| v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive()))
        .collect();
    positive.sort();
    Ok(positive
        .into_iter()
        .flat_map(|r| {
            let neg: Vec<BigInt> = r.iter().map(|c| -c).collect();
            [r, neg]
        })
        .collect())
}

/// Whether the lattice is negative definite and spanned by its roots.
pub fn is_root_system(l: &Lattice, limits: &Limits) -> Result<bool> {
    if !l.is_negative_definite() {
        return Ok(false);
    }
    let r = roots(l, limits)?;
    if l.rank() == 0 {
        return Ok(true);
    }
    if r.is_empty() {
        return Ok(false);
    }
    let m = IntegerMatrix::from_rows(r, l.rank())?;
    Ok(hermite_normal_form(&m) == IntegerMatrix::identity(l.rank()))
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiPrimitivity {
    pub quasi_primitive: bool,
    pub base_roots: usize,
    pub extension_roots: usize,
    /// A root of the extension outside the base, in base ⊗ Q coordinates.
    #[serde(serialize_with = "ser_opt_rat_vec")]
    pub certificate: Option<Vec<BigRational>>,
}

fn ser_opt_rat_vec<S: serde::Serializer>(v: &Option<Vec<BigRational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|v| v.iter().map(fmt_rat).collect::<Vec<_>>()).serialize(s)
}

/// Every root of `ext.result` lies in `base` (checked by direct enumeration).
pub fn is_quasi_primitive(base: &Lattice, ext: &Overlattice, limits: &Limits) -> Result<QuasiPrimitivity> {
    if base.gram() != ext.base.gram() {
        return domain("extension was built over a different base lattice");
    }
    if !is_root_system(base, limits)? {
        return domain("base is not a root system");
    }
    let base_roots = roots(base, limits)?.len();
    let ext_roots = roots(&ext.result, limits)?;
    let mut certificate = None;
    for r in &ext_roots {
        let rq: Vec<BigRational> = r.iter().map(rat_from_int).collect();
        let coords = ext.change_of_basis.left_apply(&rq);
        if coords.iter().any(|c| !c.is_integer()) {
            certificate = Some(coords);
            break;
        }
    }
    Ok(QuasiPrimitivity {
        quasi_primitive: certificate.is_none(),
        base_roots,
        extension_roots: ext_roots.len(),
        certificate,
    })
}

/// The canonical anti-isometry `discr S → discr S⊥` of a primitive sublattice
/// of an even unimodular lattice, as an explicit table.
#[derive(Clone, Debug)]
pub struct AntiIsometry {
    pub sublattice: FiniteQuadraticForm,
    pub complement: FiniteQuadraticForm,
    pub complement_embedding: SublatticeEmbedding,
    /// `(a, γ(a))` sorted by `a`.
    pub table: Vec<(DiscriminantElement, DiscriminantElement)>,
    /// Bijective and `q(γ a) = −q(a)` for every entry.
    pub verified: bool,
}

pub fn glue_complement_check(
    ambient: &Lattice,
    s: &SublatticeEmbedding,
    limits: &Limits,
) -> Result<AntiIsometry> {
    if !ambient.is_even() || !ambient.is_unimodular() {
        return domain("ambient lattice must be even and unimodular");
    }
    if s.ambient().gram() != ambient.gram() {
        return domain("sublattice lives in a different ambient lattice");
    }
    if !s.is_primitive() {
        return domain("sublattice is not primitive");
    }
    let t = orthogonal_complement(s)?;
    let sl = s.lattice();
    let tl = t.lattice();
    let ds = discr(&sl)?;
    let dt = discr(&tl)?;
    let n = ambient.rank();
    let k = s.rank();
    let combined = s.basis().vstack(t.basis())?;
    let inv = combined.to_rational().inverse()?;
    let sum = FiniteQuadraticForm::orthogonal_sum(&[ds.form.clone(), dt.form.clone()]);
    let mut gens = Vec::new();
    for j in 0..n {
        let coords = inv.row(j);
        let a = ds.class_of(&coords[..k])?;
        let b = dt.class_of(&coords[k..])?;
        let mut c = a.coefficients;
        c.extend(b.coefficients);
        let g = DiscriminantElement::new(c);
        if !g.is_zero() {
            gens.push(g);
        }
    }
    if sum.order() > BigInt::from(limits.element_limit) {
        return resource("discriminant too large to tabulate");
    }
    let graph = GluingKernel::new(sum, gens)?;
    let ks = ds.form.num_generators();
    let mut table: Vec<(DiscriminantElement, DiscriminantElement)> = graph
        .elements()
        .into_iter()
        .map(|e| {
            let (a, b) = e.coefficients.split_at(ks);
            (DiscriminantElement::new(a.to_vec()), DiscriminantElement::new(b.to_vec()))
        })
        .collect();
    table.sort();
    let order_s = ds.form.order();
    let order_t = dt.form.order();
    let mut firsts: Vec<_> = table.iter().map(|(a, _)| a.clone()).collect();
    let mut seconds: Vec<_> = table.iter().map(|(_, b)| b.clone()).collect();
    firsts.dedup();
    seconds.sort();
    seconds.dedup();
    let two = int(2);
    let negates = table.iter().all(|(a, b)| {
        let qa = ds.form.q(a).expect("even");
        let qb = dt.form.q(b).expect("even");
        rat_mod(&(qa + qb), &two).is_zero()
    });
    let size = BigInt::from(table.len());
    let verified = size == order_s && size == order_t && firsts.len() == table.len() && seconds.len() == table.len() && negates;
    Ok(AntiIsometry { sublattice: ds.form, complement: dt.form, complement_embedding: t, table, verified })
}

/// An involutive isometry acting on coordinate columns: `x ↦ M·x`.
#[derive(Clone, Debug)]
pub struct InvolutionSpec {
    lattice: Lattice,
    matrix: IntegerMatrix,
}

impl InvolutionSpec {
    pub fn new(lattice: Lattice, matrix: IntegerMatrix) -> Result<Self> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension("involution matrix must match the lattice rank".into()));
        }
        if matrix.mul(&matrix) != IntegerMatrix::identity(n) {
            return domain("matrix does not square to the identity");
        }
        if matrix.transpose().mul(lattice.gram()).mul(&matrix) != *lattice.gram() {
            return domain("matrix does not preserve the form");
        }
        Ok(Self { lattice, matrix })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }
}

/// Saturated `ker(1 − c)` and `ker(1 + c)`.
pub fn eigenlattices(inv: &InvolutionSpec) -> Result<(SublatticeEmbedding, SublatticeEmbedding)> {
    let inv = InvolutionSpec::new(inv.lattice.clone(), inv.matrix.clone())?;
    let n = inv.lattice.rank();
    let id = IntegerMatrix::identity(n);
    let mut minus_c = inv.matrix.neg();
    let mut plus_c = inv.matrix.clone();
    for i in 0..n {
        minus_c.set(i, i, minus_c.get(i, i) + 1);
        plus_c.set(i, i, plus_c.get(i, i) + 1);
    }
    let kernel_rows = |m: &IntegerMatrix| if m.is_zero() { id.clone() } else { integer_kernel(m) };
    let plus = SublatticeEmbedding::new(inv.lattice.clone(), kernel_rows(&minus_c))?;
    let minus = SublatticeEmbedding::new(inv.lattice.clone(), kernel_rows(&plus_c))?;
    Ok((plus, minus))
}

/// Rank over `Z/p` of an integer matrix.
pub fn rank_mod_p(m: &IntegerMatrix, p: u64) -> usize {
    let p = BigInt::from(p);
    smith_normal_form(m)
        .invariant_factors()
        .iter()
        .filter(|d| !d.is_zero() && !d.is_multiple_of(&p))
        .count()
}

/// Whether the reductions mod `p` of the two eigenlattices together span `(Z/p)ⁿ`.
pub fn eigenlattices_split_mod_p(inv: &InvolutionSpec, p: u64) -> Result<bool> {
    let (plus, minus) = eigenlattices(inv)?;
    let stacked = plus.basis().vstack(minus.basis())?;
    Ok(rank_mod_p(&stacked, p) == inv.lattice.rank())
}

/// A random involutive isometry of a random even lattice of rank at most
/// `max_rank`: a block involution on a sum of small lattices, conjugated by
/// a random unimodular change of basis.
pub fn random_involution<R: Rng>(rng: &mut R, max_rank: usize) -> InvolutionSpec {
    let pieces: [fn() -> Lattice; 6] = [
        || rank_one(-2),
        || root_a(2).expect("valid"),
        || root_a(3).expect("valid"),
        hyperbolic_plane,
        || rescale(&hyperbolic_plane(), 2).expect("valid"),
        || rank_one(-4),
    ];
    let mut parts: Vec<Lattice> = Vec::new();
    let mut total = 0;
    loop {
        let l = pieces[rng.gen_range(0..pieces.len())]();
        if total + l.rank() > max_rank.max(1) {
            break;
        }
        total += l.rank();
        parts.push(l);
        if rng.gen_bool(0.35) {
            break;
        }
    }
    if parts.is_empty() {
        parts.push(rank_one(-2));
    }
    let mut blocks: Vec<IntegerMatrix> = parts
        .iter()
        .map(|l| {
            let n = l.rank();
            match rng.gen_range(0..4) {
                0 => IntegerMatrix::identity(n),
                1 => IntegerMatrix::identity(n).neg(),
                2 if l.label().starts_with('U') => IntegerMatrix::from_i64(&[vec![0, 1], vec![1, 0]]),
                _ if l.gram().get(0, 0) == &int(-2) => {
                    // reflection in the first basis vector: x ↦ x + (x·e₀) e₀
                    let mut m = IntegerMatrix::identity(n);
                    for j in 0..n {
                        m.set(0, j, m.get(0, j) + l.gram().get(0, j));
                    }
                    m
                }
                _ => IntegerMatrix::identity(n),
            }
        })
        .collect();
    let mut lattice = direct_sum(&parts);
    let swap_last = parts.len() >= 2 && parts[parts.len() - 1].gram() == parts[parts.len() - 2].gram() && rng.gen_bool(0.5);
    if swap_last {
        let k = parts[parts.len() - 1].rank();
        blocks.truncate(blocks.len() - 2);
        let mut swap = IntegerMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            swap.set(i, k + i, int(1));
            swap.set(k + i, i, int(1));
        }
        blocks.push(swap);
    }
    let refs: Vec<&IntegerMatrix> = blocks.iter().collect();
    let c = IntegerMatrix::block_diag(&refs);
    let n = lattice.rank();
    let mut p = IntegerMatrix::identity(n);
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let k = int(rng.gen_range(-2..=2));
            for r in 0..n {
                let v = p.get(r, j) + &k * p.get(r, i);
                p.set(r, j, v);
            }
        }
    }
    let p_inv = p.to_rational().inverse().expect("unimodular").to_integer().expect("unimodular");
    let gram = p.transpose().mul(lattice.gram()).mul(&p);
    lattice = Lattice::new(gram, lattice.label().to_string()).expect("symmetric");
    InvolutionSpec::new(lattice, p_inv.mul(&c).mul(&p)).expect("conjugate of an involutive isometry")
}
