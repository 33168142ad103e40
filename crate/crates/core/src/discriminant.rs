//! Finite quadratic forms and discriminant groups `L∨/L`.
//!
//! A [`FiniteQuadraticForm`] is stored as a direct sum of cyclic groups
//! `⊕ Z/dᵢ` together with the values of the bilinear form (in `[0, 1)`) and,
//! for even lattices, of the quadratic form (in `[0, 2)`) on the generators.
//! Everything else is derived from those values by
//! `q(x + y) = q(x) + q(y) + 2 b(x, y)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, resource, Error, Result};
use crate::exact::{
    fmt_rat, hermite_normal_form, int, integer_kernel, parse_rat, rat_from_int, rat_mod,
    smith_normal_form, IntegerMatrix, RationalMatrix,
};
use crate::lattice::{orthogonal_blocks, Lattice};
use crate::Limits;

/// An element of a finite quadratic form, one residue per generator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscriminantElement {
    pub coefficients: Vec<u64>,
}

impl DiscriminantElement {
    pub fn new(coefficients: Vec<u64>) -> Self {
        Self { coefficients }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for DiscriminantElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Indices of the generators with nonzero coefficient.
pub fn support(e: &DiscriminantElement) -> Vec<usize> {
    e.coefficients.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    bilinear: Vec<Vec<BigRational>>,
    quadratic: Option<Vec<BigRational>>,
}

impl FiniteQuadraticForm {
    pub fn new(
        orders: Vec<u64>,
        bilinear: Vec<Vec<BigRational>>,
        quadratic: Option<Vec<BigRational>>,
    ) -> Result<Self> {
        let k = orders.len();
        if orders.contains(&0) {
            return domain("generator orders must be positive");
        }
        if bilinear.len() != k || bilinear.iter().any(|r| r.len() != k) {
            return Err(Error::Dimension("bilinear table must be k x k".into()));
        }
        if quadratic.as_ref().is_some_and(|q| q.len() != k) {
            return Err(Error::Dimension("one quadratic value per generator".into()));
        }
        let one = int(1);
        let two = int(2);
        let bilinear: Vec<Vec<BigRational>> =
            bilinear.iter().map(|r| r.iter().map(|x| rat_mod(x, &one)).collect()).collect();
        for i in 0..k {
            for j in 0..k {
                if bilinear[i][j] != bilinear[j][i] {
                    return Err(Error::Shape("bilinear form is not symmetric".into()));
                }
                let scaled = &bilinear[i][j] * rat_from_int(&BigInt::from(orders[i]));
                if !scaled.is_integer() {
                    return domain("bilinear value incompatible with generator order");
                }
            }
        }
        let quadratic = quadratic.map(|q| q.iter().map(|x| rat_mod(x, &two)).collect::<Vec<_>>());
        if let Some(q) = &quadratic {
            for i in 0..k {
                if rat_mod(&q[i], &one) != bilinear[i][i] {
                    return domain("quadratic values must refine the bilinear diagonal");
                }
            }
        }
        Ok(Self { orders, bilinear, quadratic })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self { orders: vec![], bilinear: vec![], quadratic: Some(vec![]) }
    }

    /// Cyclic form `<q>` of order `d` with generator value `q` (in `Q/2Z`).
    pub fn cyclic(d: u64, q: BigRational) -> Result<Self> {
        let b = rat_mod(&q, &int(1));
        Self::new(vec![d], vec![vec![b]], Some(vec![q]))
    }

    /// `n` orthogonal copies of `<-2/3>`, the discriminant of `n A₂`.
    pub fn copies_of_minus_two_thirds(n: usize) -> Self {
        let g = Self::cyclic(3, BigRational::new(int(-2), int(3))).expect("valid");
        Self::orthogonal_sum(&vec![g; n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn bilinear_table(&self) -> &[Vec<BigRational>] {
        &self.bilinear
    }

    pub fn quadratic_values(&self) -> Option<&[BigRational]> {
        self.quadratic.as_deref()
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().map(|&d| BigInt::from(d)).product()
    }

    fn order_u64(&self) -> Option<u64> {
        self.orders.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    pub fn orthogonal_sum(parts: &[FiniteQuadraticForm]) -> Self {
        let k: usize = parts.iter().map(|p| p.orders.len()).sum();
        let mut orders = Vec::with_capacity(k);
        let mut bilinear = vec![vec![BigRational::zero(); k]; k];
        let mut quadratic = Some(Vec::with_capacity(k));
        let mut off = 0;
        for p in parts {
            orders.extend_from_slice(&p.orders);
            for (i, row) in p.bilinear.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    bilinear[off + i][off + j] = v.clone();
                }
            }
            quadratic = match (quadratic, &p.quadratic) {
                (Some(mut acc), Some(q)) => {
                    acc.extend(q.iter().cloned());
                    Some(acc)
                }
                _ => None,
            };
            off += p.orders.len();
        }
        Self { orders, bilinear, quadratic }
    }

    pub fn element(&self, coefficients: &[i64]) -> Result<DiscriminantElement> {
        if coefficients.len() != self.orders.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} generators",
                coefficients.len(),
                self.orders.len()
            )));
        }
        Ok(DiscriminantElement::new(
            coefficients.iter().zip(&self.orders).map(|(&c, &d)| c.rem_euclid(d as i64) as u64).collect(),
        ))
    }

    pub fn zero(&self) -> DiscriminantElement {
        DiscriminantElement::new(vec![0; self.orders.len()])
    }

    pub fn generator(&self, i: usize) -> DiscriminantElement {
        let mut c = vec![0; self.orders.len()];
        c[i] = 1 % self.orders[i];
        DiscriminantElement::new(c)
    }

    pub fn add(&self, x: &DiscriminantElement, y: &DiscriminantElement) -> DiscriminantElement {
        DiscriminantElement::new(
            x.coefficients
                .iter()
                .zip(&y.coefficients)
                .zip(&self.orders)
                .map(|((&a, &b), &d)| ((a as u128 + b as u128) % d as u128) as u64)
                .collect(),
        )
    }

    pub fn scale(&self, c: i64, x: &DiscriminantElement) -> DiscriminantElement {
        DiscriminantElement::new(
            x.coefficients
                .iter()
                .zip(&self.orders)
                .map(|(&a, &d)| ((c as i128 * a as i128).rem_euclid(d as i128)) as u64)
                .collect(),
        )
    }

    pub fn neg(&self, x: &DiscriminantElement) -> DiscriminantElement {
        self.scale(-1, x)
    }

    pub fn element_order(&self, x: &DiscriminantElement) -> u64 {
        x.coefficients
            .iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&c, &d)| acc.lcm(&(d / c.gcd(&d))))
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &DiscriminantElement, y: &DiscriminantElement) -> BigRational {
        let mut s = BigRational::zero();
        for (i, &xi) in x.coefficients.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coefficients.iter().enumerate() {
                if yj != 0 {
                    s += &self.bilinear[i][j] * BigRational::from_integer(BigInt::from(xi) * yj);
                }
            }
        }
        rat_mod(&s, &int(1))
    }

    /// `q(x)` in `[0, 2)`; `None` for forms without a quadratic refinement.
    pub fn q(&self, x: &DiscriminantElement) -> Option<BigRational> {
        let q = self.quadratic.as_ref()?;
        let c = &x.coefficients;
        let mut s = BigRational::zero();
        for i in 0..c.len() {
            if c[i] == 0 {
                continue;
            }
            s += &q[i] * BigRational::from_integer(BigInt::from(c[i]) * c[i]);
            for j in i + 1..c.len() {
                if c[j] != 0 {
                    s += &self.bilinear[i][j] * BigRational::from_integer(BigInt::from(2u8) * c[i] * c[j]);
                }
            }
        }
        Some(rat_mod(&s, &int(2)))
    }

    pub fn is_isotropic(&self, x: &DiscriminantElement) -> bool {
        self.q(x).is_some_and(|v| v.is_zero())
    }

    /// Minimal number of generators.
    pub fn ell(&self) -> usize {
        let mut primes = BTreeSet::new();
        for &d in &self.orders {
            primes.extend(prime_factors(d));
        }
        primes.into_iter().map(|p| self.count_divisible(p)).max().unwrap_or(0)
    }

    /// Minimal number of generators of the `p`-part.
    pub fn ell_p(&self, p: u64) -> Result<usize> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        Ok(self.count_divisible(p))
    }

    fn count_divisible(&self, p: u64) -> usize {
        self.orders.iter().filter(|&&d| d % p == 0).count()
    }

    /// Invariant factors `d₁ | d₂ | …` (all > 1) of the underlying group.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.orders.len();
        let mut m = IntegerMatrix::zeros(k, k);
        for (i, &d) in self.orders.iter().enumerate() {
            m.set(i, i, BigInt::from(d));
        }
        smith_normal_form(&m).invariant_factors().into_iter().filter(|d| *d > int(1)).collect()
    }

    /// All elements in lexicographic coefficient order.
    pub fn elements(&self, limit: u64) -> Result<Vec<DiscriminantElement>> {
        let total = self.order_u64().filter(|&n| n <= limit);
        let Some(total) = total else {
            return resource(format!("group of order {} exceeds the limit {limit}", self.order()));
        };
        Ok((0..total).map(|idx| self.element_at(idx)).collect())
    }

    fn element_at(&self, mut idx: u64) -> DiscriminantElement {
        let mut c = vec![0; self.orders.len()];
        for (slot, &d) in c.iter_mut().zip(&self.orders).rev() {
            *slot = idx % d;
            idx /= d;
        }
        DiscriminantElement::new(c)
    }

    fn index_of(&self, x: &DiscriminantElement) -> u64 {
        x.coefficients.iter().zip(&self.orders).fold(0, |acc, (&c, &d)| acc * d + c)
    }

    /// Order of the subgroup generated by `gens`.
    pub fn subgroup_order(&self, gens: &[DiscriminantElement]) -> BigInt {
        let q = self.preimage_lattice(gens);
        let total = self.order();
        total / q.determinant().expect("square")
    }

    /// Hermite basis of the preimage of `⟨gens⟩` in `Zᵏ`.
    fn preimage_lattice(&self, gens: &[DiscriminantElement]) -> IntegerMatrix {
        let k = self.orders.len();
        let mut rows: Vec<Vec<BigInt>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { BigInt::from(self.orders[i]) } else { BigInt::zero() }).collect())
            .collect();
        rows.extend(gens.iter().map(|g| g.coefficients.iter().map(|&c| BigInt::from(c)).collect()));
        hermite_normal_form(&IntegerMatrix::from_rows(rows, k).expect("shape"))
    }

    fn bilinear_denominator(&self) -> BigInt {
        let mut n = BigInt::one();
        for row in &self.bilinear {
            for v in row {
                n = n.lcm(v.denom());
            }
        }
        if let Some(q) = &self.quadratic {
            for v in q {
                n = n.lcm(v.denom());
            }
        }
        n
    }

    /// Whether every element of `⟨gens⟩` is isotropic.
    pub fn is_isotropic_subgroup(&self, gens: &[DiscriminantElement]) -> bool {
        gens.iter().all(|g| self.is_isotropic(g))
            && gens.iter().enumerate().all(|(i, x)| gens[..i].iter().all(|y| self.b(x, y).is_zero()))
    }

    /// `K⊥ / K` for the subgroup `K = ⟨kernel⟩`, written in its own cyclic generators.
    pub fn perp_quotient(&self, kernel: &[DiscriminantElement]) -> Result<FiniteQuadraticForm> {
        let k = self.orders.len();
        if k == 0 {
            return Ok(self.clone());
        }
        let n = self.bilinear_denominator();
        // W x ≡ 0 (mod N) describes the preimage of K⊥
        let m = kernel.len();
        let mut w = IntegerMatrix::zeros(m, k + m);
        for (r, g) in kernel.iter().enumerate() {
            for i in 0..k {
                let mut s = BigRational::zero();
                for (l, &c) in g.coefficients.iter().enumerate() {
                    s += &self.bilinear[i][l] * BigRational::from_integer(BigInt::from(c));
                }
                let v = (s * rat_from_int(&n)).to_integer();
                w.set(r, i, v);
            }
            w.set(r, k + r, -n.clone());
        }
        let perp = if m == 0 {
            IntegerMatrix::identity(k)
        } else {
            let ker = integer_kernel(&w);
            let xs: Vec<Vec<BigInt>> = ker.row_vecs().into_iter().map(|r| r[..k].to_vec()).collect();
            hermite_normal_form(&IntegerMatrix::from_rows(xs, k)?)
        };
        if perp.rows() != k {
            return Err(Error::Domain("perp lattice lost rank".into()));
        }
        let sub = self.preimage_lattice(kernel);
        // sub = C · perp
        let c = sub.to_rational().mul(&perp.to_rational().inverse()?);
        let c = c.to_integer().ok_or_else(|| Error::Domain("kernel not contained in its orthogonal".into()))?;
        let snf = smith_normal_form(&c);
        let vinv = snf.right.to_rational().inverse()?.to_integer().expect("unimodular");
        let new_basis = vinv.mul(&perp);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for (i, d) in snf.invariant_factors().iter().enumerate() {
            if *d > int(1) {
                let coeffs: Vec<u64> = new_basis
                    .row(i)
                    .iter()
                    .zip(&self.orders)
                    .map(|(x, &o)| x.mod_floor(&BigInt::from(o)).to_u64().expect("reduced"))
                    .collect();
                gens.push(DiscriminantElement::new(coeffs));
                orders.push(d.to_u64().ok_or_else(|| Error::Resource("invariant factor too large".into()))?);
            }
        }
        Ok(self.restrict(&gens, orders))
    }

    /// The form induced on the given independent generators with the given orders.
    fn restrict(&self, gens: &[DiscriminantElement], orders: Vec<u64>) -> FiniteQuadraticForm {
        let bilinear = gens.iter().map(|x| gens.iter().map(|y| self.b(x, y)).collect()).collect();
        let quadratic = self.quadratic.as_ref().map(|_| gens.iter().map(|g| self.q(g).expect("even")).collect());
        FiniteQuadraticForm { orders, bilinear, quadratic }
    }

    /// The same group with the quadratic (and bilinear) form negated.
    pub fn negated(&self) -> FiniteQuadraticForm {
        let one = int(1);
        let two = int(2);
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            bilinear: self.bilinear.iter().map(|r| r.iter().map(|v| rat_mod(&-v, &one)).collect()).collect(),
            quadratic: self.quadratic.as_ref().map(|q| q.iter().map(|v| rat_mod(&-v, &two)).collect()),
        }
    }
}

impl fmt::Display for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .orders
            .iter()
            .enumerate()
            .map(|(i, d)| match &self.quadratic {
                Some(q) => format!("Z{d}<{}>", fmt_rat(&q[i])),
                None => format!("Z{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct FqfJson {
    orders: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    q: Option<Vec<String>>,
    b: Vec<Vec<String>>,
}

impl Serialize for FiniteQuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FqfJson {
            orders: self.orders.clone(),
            q: self.quadratic.as_ref().map(|q| q.iter().map(fmt_rat).collect()),
            b: self.bilinear.iter().map(|r| r.iter().map(fmt_rat).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteQuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FqfJson::deserialize(d)?;
        let parse_all = |v: &[String]| v.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>();
        let b = raw.b.iter().map(|r| parse_all(r)).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        let q = raw.q.as_deref().map(parse_all).transpose().map_err(D::Error::custom)?;
        FiniteQuadraticForm::new(raw.orders, b, q).map_err(D::Error::custom)
    }
}

/// Integer-scaled copy of a form for fast evaluation: values are multiplied
/// by a common denominator `den`; `q` lives mod `2·den`, `b` mod `den`.
#[derive(Clone, Debug)]
pub(crate) struct ScaledForm {
    den: i128,
    q: Option<Vec<i128>>,
    b: Vec<Vec<i128>>,
}

impl ScaledForm {
    pub(crate) fn new(f: &FiniteQuadraticForm, den: &BigInt) -> Result<Self> {
        let too_big = || Error::Resource("form too large for scaled evaluation".into());
        if *den > int(1 << 40) || f.orders.iter().any(|&d| d > (1 << 31)) {
            return Err(too_big());
        }
        let scale = |v: &BigRational| -> Result<i128> {
            (v * rat_from_int(den)).to_integer().to_i128().ok_or_else(too_big)
        };
        let b = f.bilinear.iter().map(|r| r.iter().map(scale).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let q = f.quadratic.as_ref().map(|q| q.iter().map(scale).collect::<Result<Vec<_>>>()).transpose()?;
        Ok(Self { den: den.to_i128().ok_or_else(too_big)?, q, b })
    }

    pub(crate) fn for_form(f: &FiniteQuadraticForm) -> Result<Self> {
        Self::new(f, &f.bilinear_denominator())
    }

    pub(crate) fn q(&self, c: &[i128]) -> Option<i128> {
        let q = self.q.as_ref()?;
        let m = 2 * self.den;
        let mut s = 0i128;
        for i in 0..c.len() {
            if c[i] == 0 {
                continue;
            }
            s = (s + (c[i] * c[i]).rem_euclid(m) * q[i]).rem_euclid(m);
            for j in i + 1..c.len() {
                if c[j] != 0 {
                    s = (s + (2 * c[i] * c[j]).rem_euclid(m) * self.b[i][j]).rem_euclid(m);
                }
            }
        }
        Some(s)
    }

    pub(crate) fn b(&self, x: &[i128], y: &[i128]) -> i128 {
        let mut s = 0i128;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] != 0 {
                    s = (s + (x[i] * y[j]).rem_euclid(self.den) * self.b[i][j]).rem_euclid(self.den);
                }
            }
        }
        s
    }
}

fn coeffs_i128(x: &DiscriminantElement) -> Vec<i128> {
    x.coefficients.iter().map(|&c| c as i128).collect()
}

/// Every element with `q = 0`, in lexicographic order (zero included).
pub fn isotropic_elements(a: &FiniteQuadraticForm, limits: &Limits) -> Result<Vec<DiscriminantElement>> {
    if a.quadratic.is_none() {
        return domain("isotropy needs a quadratic form (odd source lattice)");
    }
    let elements = a.elements(limits.element_limit)?;
    let fast = ScaledForm::for_form(a)?;
    Ok(elements.into_par_iter().filter(|x| fast.q(&coeffs_i128(x)) == Some(0)).collect())
}

/// Brute-force isomorphism search; on success returns the images of the
/// generators of `a` in `b`.
pub fn fqf_isomorphic(
    a: &FiniteQuadraticForm,
    b: &FiniteQuadraticForm,
    limits: &Limits,
) -> Result<Option<Vec<DiscriminantElement>>> {
    for f in [a, b] {
        if f.order() > BigInt::from(limits.isomorphism_limit) {
            return resource(format!("group order {} exceeds isomorphism limit {}", f.order(), limits.isomorphism_limit));
        }
    }
    if a.order() != b.order() || a.quadratic.is_some() != b.quadratic.is_some() {
        return Ok(None);
    }
    let den = a.bilinear_denominator().lcm(&b.bilinear_denominator());
    let fa = ScaledForm::new(a, &den)?;
    let fb = ScaledForm::new(b, &den)?;
    let elems = b.elements(limits.isomorphism_limit)?;
    let coeffs: Vec<Vec<i128>> = elems.iter().map(coeffs_i128).collect();
    let qs: Vec<Option<i128>> = coeffs.iter().map(|c| fb.q(c)).collect();
    let bb: Vec<i128> = coeffs.iter().map(|c| fb.b(c, c)).collect();
    let ords: Vec<u64> = elems.iter().map(|e| b.element_order(e)).collect();

    let k = a.orders.len();
    let gens_a: Vec<Vec<i128>> = (0..k).map(|i| coeffs_i128(&a.generator(i))).collect();
    let target_q: Vec<Option<i128>> = gens_a.iter().map(|g| fa.q(g)).collect();
    let target_b: Vec<Vec<i128>> = gens_a.iter().map(|x| gens_a.iter().map(|y| fa.b(x, y)).collect()).collect();

    struct Search<'a> {
        b: &'a FiniteQuadraticForm,
        fb: &'a ScaledForm,
        a_orders: &'a [u64],
        coeffs: &'a [Vec<i128>],
        qs: &'a [Option<i128>],
        bb: &'a [i128],
        ords: &'a [u64],
        target_q: &'a [Option<i128>],
        target_b: &'a [Vec<i128>],
        chosen: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, member: &[bool], size: u64) -> bool {
            let i = self.chosen.len();
            if i == self.a_orders.len() {
                return size as usize == member.len();
            }
            let d = self.a_orders[i];
            for h in 0..self.coeffs.len() {
                if self.ords[h] != d || self.qs[h] != self.target_q[i] || self.bb[h] != self.target_b[i][i] {
                    continue;
                }
                if !self.chosen.iter().enumerate().all(|(j, &c)| self.fb.b(&self.coeffs[h], &self.coeffs[c]) == self.target_b[i][j]) {
                    continue;
                }
                // extend the generated subgroup; it must grow by exactly a factor d
                let mut next = member.to_vec();
                let mut count = 0u64;
                let h_el = DiscriminantElement::new(self.coeffs[h].iter().map(|&c| c as u64).collect());
                let mut multiples = vec![self.b.zero()];
                for m in 1..d {
                    multiples.push(self.b.add(&multiples[m as usize - 1], &h_el));
                }
                let base: Vec<usize> = member.iter().enumerate().filter(|(_, &m)| m).map(|(idx, _)| idx).collect();
                let mut ok = true;
                'outer: for &s in &base {
                    let s_el = DiscriminantElement::new(self.coeffs[s].iter().map(|&c| c as u64).collect());
                    for (m, mult) in multiples.iter().enumerate() {
                        let idx = self.b.index_of(&self.b.add(&s_el, mult)) as usize;
                        if m > 0 && member[idx] {
                            ok = false;
                            break 'outer;
                        }
                        if !next[idx] {
                            next[idx] = true;
                            count += 1;
                        }
                    }
                }
                if !ok || count + size != size * d {
                    continue;
                }
                self.chosen.push(h);
                if self.run(&next, size * d) {
                    return true;
                }
                self.chosen.pop();
            }
            false
        }
    }

    let mut member = vec![false; elems.len()];
    member[0] = true;
    let mut search = Search {
        b,
        fb: &fb,
        a_orders: &a.orders,
        coeffs: &coeffs,
        qs: &qs,
        bb: &bb,
        ords: &ords,
        target_q: &target_q,
        target_b: &target_b,
        chosen: Vec::new(),
    };
    if search.run(&member, 1) {
        Ok(Some(search.chosen.iter().map(|&h| elems[h].clone()).collect()))
    } else {
        Ok(None)
    }
}

/// An isotropic subgroup of a discriminant form, given by generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GluingKernel {
    parent: FiniteQuadraticForm,
    generators: Vec<DiscriminantElement>,
    order: u64,
}

impl GluingKernel {
    pub fn new(parent: FiniteQuadraticForm, generators: Vec<DiscriminantElement>) -> Result<Self> {
        if generators.iter().any(|g| g.coefficients.len() != parent.num_generators()) {
            return Err(Error::Dimension("kernel generator has the wrong length".into()));
        }
        if !parent.is_isotropic_subgroup(&generators) {
            return domain("kernel is not isotropic");
        }
        let order = parent
            .subgroup_order(&generators)
            .to_u64()
            .ok_or_else(|| Error::Resource("kernel order too large".into()))?;
        Ok(Self { parent, generators, order })
    }

    pub fn trivial(parent: FiniteQuadraticForm) -> Self {
        Self { parent, generators: vec![], order: 1 }
    }

    pub fn parent(&self) -> &FiniteQuadraticForm {
        &self.parent
    }

    pub fn generators(&self) -> &[DiscriminantElement] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Every element of the subgroup, sorted.
    pub fn elements(&self) -> Vec<DiscriminantElement> {
        let mut set = BTreeSet::new();
        set.insert(self.parent.zero());
        for g in &self.generators {
            let current: Vec<_> = set.iter().cloned().collect();
            let ord = self.parent.element_order(g);
            let mut mult = self.parent.zero();
            for _ in 1..ord {
                mult = self.parent.add(&mult, g);
                for s in &current {
                    set.insert(self.parent.add(s, &mult));
                }
            }
        }
        set.into_iter().collect()
    }

    /// `K⊥/K`, the discriminant form of the corresponding overlattice.
    pub fn perp_quotient(&self) -> Result<FiniteQuadraticForm> {
        self.parent.perp_quotient(&self.generators)
    }
}

/// The lattice-side data behind `discr L`: lifts of the generators to `L⊗Q`
/// and the map sending a dual vector to its class.
#[derive(Clone, Debug)]
pub struct Discriminant {
    pub form: FiniteQuadraticForm,
    lifts: RationalMatrix,
    reduce: IntegerMatrix,
    gram: IntegerMatrix,
}

impl Discriminant {
    /// Generator lifts, one row per generator, in lattice coordinates.
    pub fn lifts(&self) -> &RationalMatrix {
        &self.lifts
    }

    /// A representative of `e` in `L∨ ⊂ L⊗Q`.
    pub fn lift(&self, e: &DiscriminantElement) -> Vec<BigRational> {
        let c: Vec<BigRational> = e.coefficients.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        self.lifts.left_apply(&c)
    }

    /// The class of a dual vector `y ∈ L∨` (lattice coordinates).
    pub fn class_of(&self, y: &[BigRational]) -> Result<DiscriminantElement> {
        let n = self.gram.rows();
        if y.len() != n {
            return Err(Error::Dimension("vector length differs from the rank".into()));
        }
        let gy: Vec<BigRational> = (0..n)
            .map(|i| (0..n).map(|j| rat_from_int(self.gram.get(i, j)) * &y[j]).sum())
            .collect();
        if gy.iter().any(|v| !v.is_integer()) {
            return domain("vector is not in the dual lattice");
        }
        let gy: Vec<BigInt> = gy.iter().map(|v| v.to_integer()).collect();
        let coeffs = (0..self.reduce.rows())
            .map(|i| {
                let v: BigInt = self.reduce.row(i).iter().zip(&gy).map(|(a, b)| a * b).sum();
                v.mod_floor(&BigInt::from(self.form.orders[i])).to_u64().expect("reduced")
            })
            .collect();
        Ok(DiscriminantElement::new(coeffs))
    }
}

/// `discr L = L∨/L` with its bilinear and quadratic forms.
///
/// Orthogonal blocks of the Gram matrix are treated separately, so the
/// discriminant of an orthogonal sum comes out as the orthogonal sum of the
/// summands' discriminants, generator by generator.
pub fn discr(l: &Lattice) -> Result<Discriminant> {
    if !l.is_nondegenerate() {
        return domain("discriminant of a degenerate lattice");
    }
    if !l.is_even() {
        return domain("discriminant form requires an even lattice");
    }
    let n = l.rank();
    let g = l.gram();
    let mut lift_rows: Vec<Vec<BigRational>> = Vec::new();
    let mut reduce_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut orders = Vec::new();
    for block in orthogonal_blocks(g) {
        let m = block.len();
        let mut sub = IntegerMatrix::zeros(m, m);
        for (a, &i) in block.iter().enumerate() {
            for (b, &j) in block.iter().enumerate() {
                sub.set(a, b, g.get(i, j).clone());
            }
        }
        let snf = smith_normal_form(&sub);
        for (t, d) in snf.invariant_factors().iter().enumerate() {
            if *d <= int(1) {
                continue;
            }
            let mut lift = vec![BigRational::zero(); n];
            let mut red = vec![BigInt::zero(); n];
            for (a, &i) in block.iter().enumerate() {
                lift[i] = BigRational::new(snf.right.get(a, t).clone(), d.clone());
                red[i] = snf.left.get(t, a).clone();
            }
            lift_rows.push(lift);
            reduce_rows.push(red);
            orders.push(d.to_u64().ok_or_else(|| Error::Resource("invariant factor too large".into()))?);
        }
    }
    let k = orders.len();
    let lifts = RationalMatrix::from_rows(lift_rows, n)?;
    let reduce = IntegerMatrix::from_rows(reduce_rows, n)?;
    let gq = g.to_rational();
    let prod = lifts.mul(&gq).mul(&lifts.transpose());
    let one = int(1);
    let two = int(2);
    let bilinear = (0..k).map(|i| (0..k).map(|j| rat_mod(prod.get(i, j), &one)).collect()).collect();
    let quadratic = Some((0..k).map(|i| rat_mod(prod.get(i, i), &two)).collect());
    let form = FiniteQuadraticForm::new(orders, bilinear, quadratic)?;
    Ok(Discriminant { form, lifts, reduce, gram: g.clone() })
}

pub fn ell(a: &FiniteQuadraticForm) -> usize {
    a.ell()
}

pub fn ell_p(a: &FiniteQuadraticForm, p: u64) -> Result<usize> {
    a.ell_p(p)
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Isotropic subgroups of n<-2/3> up to signed permutations of the generators.

type F3Vec = Vec<u8>;

/// Row-reduced echelon basis over F₃; the canonical key of a subgroup.
fn rref_f3(rows: &[F3Vec]) -> Vec<F3Vec> {
    let mut m: Vec<F3Vec> = rows.to_vec();
    let n = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        if m[r][c] == 2 {
            for x in m[r].iter_mut() {
                *x = (*x * 2) % 3;
            }
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                let src = m[r].clone();
                for (x, s) in m[i].iter_mut().zip(src) {
                    *x = (*x + 3 * 3 - f * s) % 3;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn span_f3(basis: &[F3Vec], n: usize) -> Vec<F3Vec> {
    let mut out = vec![vec![0u8; n]];
    for b in basis {
        let cur = out.clone();
        for c in 1..3u8 {
            for v in &cur {
                out.push(v.iter().zip(b).map(|(x, y)| (x + c * y) % 3).collect());
            }
        }
    }
    out
}

fn flatten(rows: &[F3Vec]) -> Vec<u8> {
    rows.iter().flatten().copied().collect()
}

fn unflatten(key: &[u8], n: usize) -> Vec<F3Vec> {
    key.chunks(n).map(<[u8]>::to_vec).collect()
}

fn is_minus_two_thirds_shape(a: &FiniteQuadraticForm) -> bool {
    let Some(q) = &a.quadratic else { return false };
    let minus_two_thirds = BigRational::new(int(4), int(3));
    let third = BigRational::new(int(1), int(3));
    a.orders.iter().all(|&d| d == 3)
        && q.iter().all(|v| *v == minus_two_thirds)
        && (0..a.orders.len()).all(|i| {
            (0..a.orders.len()).all(|j| a.bilinear[i][j] == if i == j { third.clone() } else { BigRational::zero() })
        })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Predicate on the support (sorted generator indices) of a nonzero element.
pub type SupportFilter<'a> = &'a (dyn Fn(&[usize]) -> bool + Sync);

/// Orbit representatives of the isotropic subgroups of the given order in
/// `n<-2/3>` under signed permutations of the generators.
///
/// With a filter, only subgroups whose every nonzero element has an accepted
/// support are considered; the filter must be invariant under permutations.
/// Each representative is the orbit member whose row-reduced generator
/// matrix is lexicographically smallest; output is sorted by that matrix.
pub fn isotropic_subgroups_up_to_signed_permutation(
    a: &FiniteQuadraticForm,
    order: u64,
    filter: Option<SupportFilter<'_>>,
    limits: &Limits,
) -> Result<Vec<GluingKernel>> {
    if !is_minus_two_thirds_shape(a) {
        return domain("form is not an orthogonal sum of copies of <-2/3>");
    }
    let mut rank = 0u32;
    let mut o = order;
    while o > 1 && o % 3 == 0 {
        o /= 3;
        rank += 1;
    }
    if o != 1 || order == 0 {
        return domain(format!("subgroup order {order} is not a power of 3"));
    }
    let keys = isotropic_subgroup_keys(a, rank as usize, filter, limits)?;
    let n = a.num_generators();
    if rank == 0 {
        return Ok(vec![GluingKernel::trivial(a.clone())]);
    }
    let index: HashMap<&[u8], usize> = keys.iter().enumerate().map(|(i, k)| (k.as_slice(), i)).collect();
    let mut uf = UnionFind((0..keys.len()).collect());
    let moves: Vec<Box<dyn Fn(&F3Vec) -> F3Vec>> = {
        let mut v: Vec<Box<dyn Fn(&F3Vec) -> F3Vec>> = vec![Box::new(|x: &F3Vec| {
            let mut y = x.clone();
            y[0] = (3 - y[0]) % 3;
            y
        })];
        if n >= 2 {
            v.push(Box::new(|x: &F3Vec| {
                let mut y = x.clone();
                y.swap(0, 1);
                y
            }));
            v.push(Box::new(|x: &F3Vec| {
                let mut y = x.clone();
                y.rotate_right(1);
                y
            }));
        }
        v
    };
    for (i, key) in keys.iter().enumerate() {
        let rows = unflatten(key, n);
        for mv in &moves {
            let image: Vec<F3Vec> = rows.iter().map(|r| mv(r)).collect();
            let image_key = flatten(&rref_f3(&image));
            let Some(&j) = index.get(image_key.as_slice()) else {
                return domain("support filter is not invariant under signed permutations");
            };
            uf.union(i, j);
        }
    }
    // keys are sorted, so the root (smallest index) is the lexicographic minimum
    let mut reps = BTreeSet::new();
    for i in 0..keys.len() {
        reps.insert(uf.find(i));
    }
    reps.into_iter()
        .map(|i| {
            let gens = unflatten(&keys[i], n)
                .into_iter()
                .map(|r| DiscriminantElement::new(r.into_iter().map(u64::from).collect()))
                .collect();
            GluingKernel::new(a.clone(), gens)
        })
        .collect()
}

/// Sorted canonical keys of all filtered isotropic subgroups of F₃-rank `rank`.
fn isotropic_subgroup_keys(
    a: &FiniteQuadraticForm,
    rank: usize,
    filter: Option<SupportFilter<'_>>,
    limits: &Limits,
) -> Result<Vec<Vec<u8>>> {
    let n = a.num_generators();
    if rank == 0 {
        return Ok(vec![vec![]]);
    }
    let fast = ScaledForm::for_form(a)?;
    let passes = |v: &F3Vec| -> bool {
        let supp: Vec<usize> = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect();
        filter.is_none_or(|f| f(&supp))
    };
    let iso: Vec<F3Vec> = isotropic_elements(a, limits)?
        .into_iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.coefficients.iter().map(|&c| c as u8).collect::<F3Vec>())
        .filter(|v| passes(v))
        .collect();
    let as_i128 = |v: &F3Vec| -> Vec<i128> { v.iter().map(|&c| c as i128).collect() };
    let mut level: BTreeSet<Vec<u8>> = iso.iter().map(|v| flatten(&rref_f3(std::slice::from_ref(v)))).collect();
    for _ in 1..rank {
        let current: Vec<Vec<u8>> = level.into_iter().collect();
        if (current.len() as u64).saturating_mul(iso.len() as u64) > limits.element_limit.saturating_mul(100) {
            return resource(format!(
                "subgroup extension scan of {} x {} candidates exceeds the limit",
                current.len(),
                iso.len()
            ));
        }
        let next: Vec<Vec<Vec<u8>>> = current
            .par_iter()
            .map(|key| {
                let basis = unflatten(key, n);
                let members = span_f3(&basis, n);
                let basis_i: Vec<Vec<i128>> = basis.iter().map(as_i128).collect();
                let mut found = Vec::new();
                for x in &iso {
                    if members.contains(x) {
                        continue;
                    }
                    let xi = as_i128(x);
                    if basis_i.iter().any(|h| fast.b(&xi, h) != 0) {
                        continue;
                    }
                    let mut rows = basis.clone();
                    rows.push(x.clone());
                    let rows = rref_f3(&rows);
                    let new_key = flatten(&rows);
                    if span_f3(&rows, n).iter().skip(1).all(passes) {
                        found.push(new_key);
                    }
                }
                found
            })
            .collect();
        level = next.into_iter().flatten().collect();
        if level.len() as u64 > limits.element_limit {
            return resource("too many candidate subgroups");
        }
    }
    Ok(level.into_iter().collect())
}

/// Overlap pattern `(p, q)` of two elements of `n<-2/3>`: on the common
/// support, `p` coefficients agree and `q` disagree, normalised to `p ≥ q`.
pub fn overlap_pattern(a1: &DiscriminantElement, a2: &DiscriminantElement) -> (usize, usize) {
    let (mut same, mut opposite) = (0, 0);
    for (x, y) in a1.coefficients.iter().zip(&a2.coefficients) {
        if *x != 0 && *y != 0 {
            if x == y {
                same += 1;
            } else {
                opposite += 1;
            }
        }
    }
    (same.max(opposite), same.min(opposite))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::lattice::{copies, hyperbolic_plane, rescale, root_a, root_e};

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn discr_a2() {
        let d = discr(&root_a(2).unwrap()).unwrap();
        assert_eq!(d.form.orders(), &[3]);
        assert_eq!(d.form.quadratic_values().unwrap(), &[rat(4, 3)]);
    }

    #[test]
    fn discr_u2_and_e8() {
        let d = discr(&rescale(&hyperbolic_plane(), 2).unwrap()).unwrap();
        assert_eq!(d.form.orders(), &[2, 2]);
        assert_eq!(d.form.ell_p(2).unwrap(), 2);
        let e8 = discr(&root_e(8).unwrap()).unwrap();
        assert_eq!(e8.form.order(), int(1));
        assert_eq!(e8.form.ell(), 0);
    }

    #[test]
    fn discr_rejects_bad_lattices() {
        let odd = crate::lattice::rank_one(1);
        assert!(matches!(discr(&odd), Err(Error::Domain(_))));
        let deg = Lattice::from_i64(&[vec![0, 0], vec![0, 0]], "").unwrap();
        assert!(matches!(discr(&deg), Err(Error::Domain(_))));
    }

    #[test]
    fn lifts_map_back_to_generators() {
        for l in [root_a(2).unwrap(), root_e(6).unwrap(), rescale(&hyperbolic_plane(), 2).unwrap(), crate::lattice::root_d(4).unwrap()] {
            let d = discr(&l).unwrap();
            for i in 0..d.form.num_generators() {
                let g = d.form.generator(i);
                assert_eq!(d.class_of(&d.lift(&g)).unwrap(), g);
            }
        }
    }

    #[test]
    fn ell_examples() {
        let s = FiniteQuadraticForm::copies_of_minus_two_thirds(8);
        assert_eq!(s.ell_p(3).unwrap(), 8);
        assert_eq!(FiniteQuadraticForm::trivial().ell_p(5).unwrap(), 0);
        assert!(matches!(s.ell_p(4), Err(Error::Domain(_))));
        let mixed = FiniteQuadraticForm::orthogonal_sum(&[
            FiniteQuadraticForm::cyclic(2, rat(1, 2)).unwrap(),
            FiniteQuadraticForm::cyclic(3, rat(2, 3)).unwrap(),
        ]);
        assert_eq!(mixed.ell(), 1);
        assert_eq!(mixed.invariant_factors(), vec![int(6)]);
    }

    #[test]
    fn isotropic_elements_small() {
        let a2 = discr(&root_a(2).unwrap()).unwrap().form;
        assert_eq!(isotropic_elements(&a2, &limits()).unwrap(), vec![a2.zero()]);
        let three = discr(&copies(3, &root_a(2).unwrap())).unwrap().form;
        let iso = isotropic_elements(&three, &limits()).unwrap();
        assert_eq!(iso.len(), 9);
        assert!(iso.iter().skip(1).all(|e| support(e).len() == 3));
    }

    #[test]
    fn isotropic_support_six_in_8a2() {
        let s = discr(&copies(8, &root_a(2).unwrap())).unwrap().form;
        let iso = isotropic_elements(&s, &limits()).unwrap();
        assert_eq!(iso.iter().filter(|e| support(e).len() == 6).count(), 28 * 64);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let s = FiniteQuadraticForm::copies_of_minus_two_thirds(8);
        let tight = Limits { element_limit: 100, ..Limits::default() };
        assert!(matches!(isotropic_elements(&s, &tight), Err(Error::Resource(_))));
    }

    #[test]
    fn support_examples() {
        let s = FiniteQuadraticForm::copies_of_minus_two_thirds(8);
        assert!(support(&s.zero()).is_empty());
        let a1 = s.element(&[1, 1, 1, 1, 1, 1, 0, 0]).unwrap();
        assert_eq!(support(&a1), vec![0, 1, 2, 3, 4, 5]);
        let two_g1 = s.scale(2, &s.generator(0));
        assert_eq!(support(&two_g1), vec![0]);
    }

    #[test]
    fn orbits_of_3a2() {
        let f = FiniteQuadraticForm::copies_of_minus_two_thirds(3);
        let reps = isotropic_subgroups_up_to_signed_permutation(&f, 3, None, &limits()).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].generators(), &[f.element(&[1, 1, 1]).unwrap()]);
        assert!(isotropic_subgroups_up_to_signed_permutation(&f, 9, None, &limits()).unwrap().is_empty());
        assert!(isotropic_subgroups_up_to_signed_permutation(&f, 6, None, &limits()).is_err());
    }

    #[test]
    fn wrong_shape_rejected() {
        let u2 = discr(&rescale(&hyperbolic_plane(), 2).unwrap()).unwrap().form;
        assert!(matches!(
            isotropic_subgroups_up_to_signed_permutation(&u2, 3, None, &limits()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn perp_quotient_of_3a2_kernel() {
        let f = FiniteQuadraticForm::copies_of_minus_two_thirds(3);
        let k = GluingKernel::new(f.clone(), vec![f.element(&[1, 1, 1]).unwrap()]).unwrap();
        let pq = k.perp_quotient().unwrap();
        assert_eq!(pq.orders(), &[3]);
        assert_eq!(pq.quadratic_values().unwrap(), &[rat(2, 3)]);
    }

    #[test]
    fn non_isotropic_kernel_rejected() {
        let f = FiniteQuadraticForm::copies_of_minus_two_thirds(3);
        assert!(GluingKernel::new(f.clone(), vec![f.element(&[1, 1, 0]).unwrap()]).is_err());
    }

    #[test]
    fn isomorphism_examples() {
        let a2 = discr(&root_a(2).unwrap()).unwrap().form;
        assert!(fqf_isomorphic(&a2, &a2, &limits()).unwrap().is_some());
        let plus = FiniteQuadraticForm::cyclic(3, rat(2, 3)).unwrap();
        assert!(fqf_isomorphic(&a2, &plus, &limits()).unwrap().is_none());
        let e6 = discr(&root_e(6).unwrap()).unwrap().form;
        assert!(fqf_isomorphic(&plus, &e6, &limits()).unwrap().is_some());
        let big = FiniteQuadraticForm::copies_of_minus_two_thirds(9);
        assert!(matches!(fqf_isomorphic(&big, &big, &limits()), Err(Error::Resource(_))));
    }

    #[test]
    fn isomorphism_sees_through_generator_choice() {
        // Z2 x Z2 with the U(2) form versus the same form in a shuffled basis
        let u2 = discr(&rescale(&hyperbolic_plane(), 2).unwrap()).unwrap().form;
        let g = [u2.element(&[1, 1]).unwrap(), u2.element(&[0, 1]).unwrap()];
        let other = u2.restrict(&g, vec![2, 2]);
        let w = fqf_isomorphic(&u2, &other, &limits()).unwrap().unwrap();
        assert_eq!(w.len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let f = discr(&root_a(2).unwrap()).unwrap().form;
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"orders":[3],"q":["4/3"],"b":[["1/3"]]}"#);
        let back: FiniteQuadraticForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn overlap_patterns() {
        let s = FiniteQuadraticForm::copies_of_minus_two_thirds(8);
        let a1 = s.element(&[1, 1, 1, 1, 1, 1, 0, 0]).unwrap();
        let a2 = s.element(&[1, 1, -1, -1, 0, 0, 1, 1]).unwrap();
        assert_eq!(overlap_pattern(&a1, &a2), (2, 2));
        let a3 = s.element(&[1, 1, 1, 1, -1, 0, 1, 0]).unwrap();
        assert_eq!(overlap_pattern(&a1, &a3), (4, 1));
    }
}
