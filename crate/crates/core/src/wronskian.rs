//! Exact univariate polynomials over `Q` and `Q(i)`, Wronskians, Sturm
//! counting, Möbius realifiability of rational maps and the bidegree of the
//! image of `t ↦ (f(t), f̄(t))` in `P¹×P¹`.
//!
//! Polynomial literals use the variable `t`:
//!
//! ```text
//! poly  := ['+'|'-'] term (('+'|'-') term)*
//! term  := coeff ['*'] ['t' ['^' N]]  |  't' ['^' N]
//! coeff := Q | Q 'i' | 'i' | '(' gauss ')'
//! gauss := ['+'|'-'] (Q | Q 'i' | 'i') [('+'|'-') (Q 'i' | 'i')]
//! Q     := N ['/' N]
//! ```
//!
//! e.g. `3/2*t^2 - t + 1`, `(1+2i)*t`, `i*t^3 - 1/2`. Whitespace is ignored.
//! Printing is canonical and parses back to the same polynomial.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::{fmt_rat, nullspace, parse_rat, FieldElem};

/// `re + im·i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        let num = self * o.conj();
        Self::new(num.re / &n, num.im / n)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::real(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

fn fmt_imag(b: &BigRational) -> String {
    if b.is_one() {
        "i".into()
    } else if *b == -BigRational::one() {
        "-i".into()
    } else {
        format!("{}i", fmt_rat(b))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => f.write_str(&fmt_rat(&self.re)),
            (true, false) => f.write_str(&fmt_imag(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{sign}{}", fmt_rat(&self.re), fmt_imag(&self.im.abs()))
            }
        }
    }
}

/// Coefficient fields the polynomial code runs over.
pub trait Scalar: FieldElem + fmt::Debug {
    fn from_i64(n: i64) -> Self;
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl Scalar for GaussianRational {
    fn from_i64(n: i64) -> Self {
        GaussianRational::from_ints(n, 0)
    }
}

/// Dense polynomial in `t`, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

pub type RationalPolynomial = Poly<GaussianRational>;
pub type RealPolynomial = Poly<BigRational>;

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: F, n: usize) -> Self {
        let mut v = vec![F::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * F::from_i64(i as i64)).collect())
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let Some(dd) = d.degree() else {
            return domain("polynomial division by zero");
        };
        let lead = d.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Divides out the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = F::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd nonzero").0.monic()
    }

    /// Exact quotient; errors when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return domain("inexact polynomial division");
        }
        Ok(q)
    }
}

impl Poly<GaussianRational> {
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(GaussianRational::conj).collect())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn to_real(&self) -> Option<RealPolynomial> {
        self.is_real().then(|| Poly::new(self.coeffs.iter().map(|c| c.re.clone()).collect()))
    }

    pub fn from_real(p: &RealPolynomial) -> Self {
        Self::new(p.coeffs.iter().map(|c| GaussianRational::real(c.clone())).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        Parser::new(s).poly()
    }
}

fn fmt_terms<F>(coeffs: &[F], f: &mut fmt::Formatter<'_>, split: impl Fn(&F) -> (bool, String, bool)) -> fmt::Result {
    if coeffs.is_empty() {
        return f.write_str("0");
    }
    let mut first = true;
    for n in (0..coeffs.len()).rev() {
        let (zero, body, negative) = split(&coeffs[n]);
        if zero {
            continue;
        }
        let var = match n {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{n}"),
        };
        let body = if body == "1" && n > 0 { String::new() } else { body };
        let term = match (body.is_empty(), var.is_empty()) {
            (true, _) => var,
            (false, true) => body,
            (false, false) => format!("{body}*{var}"),
        };
        match (first, negative) {
            (true, true) => write!(f, "-{term}")?,
            (true, false) => write!(f, "{term}")?,
            (false, true) => write!(f, " - {term}")?,
            (false, false) => write!(f, " + {term}")?,
        }
        first = false;
    }
    Ok(())
}

impl fmt::Display for Poly<GaussianRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.coeffs, f, |c| {
            if c.is_zero() {
                (true, String::new(), false)
            } else if c.is_real() {
                (false, fmt_rat(&c.re.abs()), c.re.is_negative())
            } else {
                (false, format!("({c})"), false)
            }
        })
    }
}

impl fmt::Display for Poly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.coeffs, f, |c| (c.is_zero(), fmt_rat(&c.abs()), c.is_negative()))
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    source: String,
}

impl Parser {
    fn new(s: &str) -> Self {
        Self { chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, source: s.to_string() }
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.source)))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sign(&mut self) -> Option<bool> {
        if self.eat('+') {
            Some(false)
        } else if self.eat('-') {
            Some(true)
        } else {
            None
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn rational(&mut self) -> Result<Option<BigRational>> {
        let Some(n) = self.digits() else { return Ok(None) };
        let mut s = n;
        if self.peek() == Some('/') {
            self.pos += 1;
            let Some(d) = self.digits() else { return self.err("expected a denominator") };
            s = format!("{s}/{d}");
        }
        Ok(Some(parse_rat(&s)?))
    }

    /// `Q`, `Q i` or `i`, unsigned.
    fn real_or_imag(&mut self) -> Result<Option<GaussianRational>> {
        match self.rational()? {
            Some(r) => {
                if self.eat('i') {
                    Ok(Some(GaussianRational::new(BigRational::zero(), r)))
                } else {
                    Ok(Some(GaussianRational::real(r)))
                }
            }
            None if self.eat('i') => Ok(Some(GaussianRational::i())),
            None => Ok(None),
        }
    }

    fn gaussian(&mut self) -> Result<GaussianRational> {
        let neg = self.sign() == Some(true);
        let Some(mut z) = self.real_or_imag()? else { return self.err("expected a number") };
        if neg {
            z = -z;
        }
        if let Some(neg2) = self.sign() {
            let Some(w) = self.real_or_imag()? else { return self.err("expected an imaginary part") };
            if !z.im.is_zero() || !w.re.is_zero() {
                return self.err("expected a+bi");
            }
            z = z + if neg2 { -w } else { w };
        }
        Ok(z)
    }

    fn term(&mut self) -> Result<(GaussianRational, usize)> {
        let coeff = if self.eat('(') {
            let z = self.gaussian()?;
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            Some(z)
        } else {
            self.real_or_imag()?
        };
        let starred = coeff.is_some() && self.eat('*');
        let mut power = 0;
        if self.eat('t') {
            power = 1;
            if self.eat('^') {
                let Some(d) = self.digits() else { return self.err("expected an exponent") };
                power = d.parse().map_err(|_| Error::Parse(format!("exponent too large in {:?}", self.source)))?;
            }
        } else if starred || coeff.is_none() {
            return self.err("expected 't'");
        }
        Ok((coeff.unwrap_or_else(GaussianRational::one), power))
    }

    fn poly(&mut self) -> Result<RationalPolynomial> {
        if self.chars.is_empty() {
            return self.err("empty polynomial");
        }
        let mut acc: Vec<GaussianRational> = Vec::new();
        let mut first = true;
        while self.pos < self.chars.len() {
            let neg = match self.sign() {
                Some(n) => n,
                None if first => false,
                None => return self.err("expected '+' or '-'"),
            };
            let (c, p) = self.term()?;
            if acc.len() <= p {
                acc.resize(p + 1, GaussianRational::zero());
            }
            acc[p] = acc[p].clone() + if neg { -c } else { c };
            first = false;
        }
        Ok(Poly::new(acc))
    }
}

/// Determinant over a field by elimination.
fn det_field<F: Scalar>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = det * pivot.clone();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() / pivot.clone();
            for k in c..n {
                let v = m[c][k].clone();
                m[r][k] = m[r][k].clone() - f.clone() * v;
            }
        }
    }
    det
}

/// Resultant from the Sylvester matrix, with `a`, `b` read as having formal
/// degrees `da`, `db` (leading coefficients may vanish).
pub fn resultant<F: Scalar>(a: &Poly<F>, da: usize, b: &Poly<F>, db: usize) -> F {
    let n = da + db;
    if n == 0 {
        return F::one();
    }
    let mut m = vec![vec![F::zero(); n]; n];
    for r in 0..db {
        for j in 0..=da {
            m[r][r + j] = a.coeff(da - j);
        }
    }
    for r in 0..da {
        for j in 0..=db {
            m[db + r][r + j] = b.coeff(db - j);
        }
    }
    det_field(m)
}

/// The polynomial through `(xs[k], ys[k])` (Newton form).
pub fn interpolate<F: Scalar>(xs: &[F], ys: &[F]) -> Poly<F> {
    let n = xs.len();
    let mut dd: Vec<F> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
        }
    }
    let mut p = Poly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p.mul(&Poly::new(vec![-xs[i].clone(), F::one()])).add(&Poly::constant(dd[i].clone()));
    }
    p
}

/// Determinant of the matrix whose row `i` holds the `i`-th derivatives.
pub fn wronskian<F: Scalar>(polys: &[Poly<F>]) -> Result<Poly<F>> {
    if polys.is_empty() {
        return domain("Wronskian of an empty list");
    }
    let n = polys.len();
    let mut rows = vec![polys.to_vec()];
    for i in 1..n {
        rows.push(rows[i - 1].iter().map(Poly::derivative).collect());
    }
    Ok(poly_det(&rows, &(0..n).collect::<Vec<_>>(), 0))
}

/// Cofactor expansion along row `r` over the remaining columns.
fn poly_det<F: Scalar>(m: &[Vec<Poly<F>>], cols: &[usize], r: usize) -> Poly<F> {
    if cols.len() == 1 {
        return m[r][cols[0]].clone();
    }
    let mut acc = Poly::zero();
    for (k, &c) in cols.iter().enumerate() {
        if m[r][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = m[r][c].mul(&poly_det(m, &rest, r + 1));
        acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// `p/q` in lowest terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMap {
    num: RationalPolynomial,
    den: RationalPolynomial,
}

impl RationalMap {
    pub fn new(num: RationalPolynomial, den: RationalPolynomial) -> Result<Self> {
        if den.is_zero() {
            return domain("zero denominator");
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() { (num, den) } else { (num.exact_div(&g)?, den.exact_div(&g)?) };
        let l = den.leading().expect("nonzero").clone();
        let inv = GaussianRational::one() / l;
        num = num.scale(&inv);
        den = den.scale(&inv);
        Ok(Self { num, den })
    }

    pub fn polynomial(p: RationalPolynomial) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// `"(p)/(q)"` or a bare polynomial.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(close) = matching_paren(&t) {
            let rest = &t[close + 1..];
            if let Some(den) = rest.strip_prefix("/(").and_then(|r| r.strip_suffix(')')) {
                return Self::new(Poly::parse(&t[1..close])?, Poly::parse(den)?);
            }
        }
        Ok(Self::polynomial(Poly::parse(&t)?))
    }

    pub fn numerator(&self) -> &RationalPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &RationalPolynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Coefficient-wise conjugate `f̄`.
    pub fn conj(&self) -> Self {
        Self { num: self.num.conj(), den: self.den.conj() }
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    if !s.starts_with('(') {
        return None;
    }
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

/// `w ↦ (a·w + b)/(c·w + d)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MobiusTransform {
    pub a: GaussianRational,
    pub b: GaussianRational,
    pub c: GaussianRational,
    pub d: GaussianRational,
}

impl MobiusTransform {
    pub fn new(a: GaussianRational, b: GaussianRational, c: GaussianRational, d: GaussianRational) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.determinant().is_zero() {
            return domain("degenerate Möbius transformation");
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let (o, z) = (GaussianRational::one(), GaussianRational::zero());
        Self { a: o.clone(), b: z.clone(), c: z, d: o }
    }

    pub fn determinant(&self) -> GaussianRational {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        let m = |x: &GaussianRational, y: &GaussianRational| x.clone() * y.clone();
        Self {
            a: m(&self.a, &o.a) + m(&self.b, &o.c),
            b: m(&self.a, &o.b) + m(&self.b, &o.d),
            c: m(&self.c, &o.a) + m(&self.d, &o.c),
            d: m(&self.c, &o.b) + m(&self.d, &o.d),
        }
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.conj(), b: self.b.conj(), c: self.c.conj(), d: self.d.conj() }
    }

    /// Acts as the identity on `P¹` (matrix is a nonzero scalar).
    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && !self.a.is_zero()
    }

    /// `φ ∘ f`.
    pub fn apply(&self, f: &RationalMap) -> Result<RationalMap> {
        let (p, q) = (&f.num, &f.den);
        RationalMap::new(
            p.scale(&self.a).add(&q.scale(&self.b)),
            p.scale(&self.c).add(&q.scale(&self.d)),
        )
    }

    /// Scales so that the first nonzero entry of `(a, b, c, d)` is one.
    fn normalized(self) -> Self {
        let lead = [&self.a, &self.b, &self.c, &self.d].into_iter().find(|x| !x.is_zero()).cloned();
        match lead {
            None => self,
            Some(l) => {
                let s = |x: GaussianRational| x / l.clone();
                Self { a: s(self.a), b: s(self.b), c: s(self.c), d: s(self.d) }
            }
        }
    }
}

impl fmt::Display for MobiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w -> (({})*w + ({}))/(({})*w + ({}))", self.a, self.b, self.c, self.d)
    }
}

/// `p′q − pq′` made monic. Zero exactly when `f` is constant.
pub fn critical_polynomial(f: &RationalMap) -> Result<RationalPolynomial> {
    if f.is_constant() {
        return domain("constant map has no critical polynomial");
    }
    let w = wronskian(&[f.den.clone(), f.num.clone()])?;
    Ok(w.monic())
}

/// Open interval endpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInfinity,
    PosInfinity,
    Finite(BigRational),
}

fn sturm_chain(p: &RealPolynomial) -> Vec<RealPolynomial> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    chain
}

fn sign_at(p: &RealPolynomial, x: &Bound) -> i32 {
    let s = match x {
        Bound::Finite(v) => p.eval(v),
        Bound::PosInfinity => p.leading().cloned().unwrap_or_else(BigRational::zero),
        Bound::NegInfinity => {
            let l = p.leading().cloned().unwrap_or_else(BigRational::zero);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -l
            } else {
                l
            }
        }
    };
    if s.is_positive() {
        1
    } else if s.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(chain: &[RealPolynomial], x: &Bound) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| sign_at(p, x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of `p` in the open interval `(lo, hi)`.
/// The square-free part is taken first, so multiplicities are ignored.
pub fn sturm_count(p: &RealPolynomial, lo: &Bound, hi: &Bound) -> Result<usize> {
    if p.is_zero() {
        return domain("Sturm count of the zero polynomial");
    }
    let q = p.square_free_part();
    if q.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(&q);
    let (va, vb) = (variations(&chain, lo), variations(&chain, hi));
    // V(a) - V(b) counts roots in (a, b]
    let half_open = va.saturating_sub(vb);
    let at_hi = matches!(hi, Bound::Finite(b) if q.eval(b).is_zero());
    Ok(half_open - usize::from(at_hi && half_open > 0))
}

pub fn real_root_count(p: &RealPolynomial) -> Result<usize> {
    sturm_count(p, &Bound::NegInfinity, &Bound::PosInfinity)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalReality {
    pub all_real: bool,
    /// Distinct finite critical points.
    pub distinct_critical_points: usize,
    pub real_critical_points: usize,
    /// Multiplicity of `t = ∞` as a critical point.
    pub at_infinity: usize,
    /// The critical polynomial is not real up to a unit; counts refer to the
    /// real polynomial `gcd(P, P̄)`.
    pub flagged: bool,
}

/// Multiplicity of `∞` as a critical point: `2d − 2` minus the finite count.
fn critical_multiplicity_at_infinity(f: &RationalMap, crit: &RationalPolynomial) -> usize {
    (2 * f.degree() - 2).saturating_sub(crit.degree().unwrap_or(0))
}

/// Whether every critical point of `f` lies on the real line (or at `∞`).
pub fn all_critical_points_real(f: &RationalMap) -> Result<CriticalReality> {
    let crit = critical_polynomial(f)?;
    let sf = crit.square_free_part();
    let (real_rep, flagged) = match sf.to_real() {
        Some(r) => (r, false),
        None => (sf.gcd(&sf.conj()).to_real().expect("gcd with the conjugate is real"), true),
    };
    let real = real_root_count(&real_rep)?;
    let distinct = sf.degree().unwrap_or(0);
    Ok(CriticalReality {
        all_real: !flagged && real == distinct,
        distinct_critical_points: distinct,
        real_critical_points: real,
        at_infinity: critical_multiplicity_at_infinity(f, &crit),
        flagged,
    })
}

/// Total critical multiplicity including `∞`; equals `2d − 2` by Riemann–Hurwitz.
pub fn total_critical_multiplicity(f: &RationalMap) -> Result<usize> {
    let crit = critical_polynomial(f)?;
    let d = f.degree();
    let rev = |p: &RationalPolynomial| {
        let mut c = p.coeffs().to_vec();
        c.resize(d + 1, GaussianRational::zero());
        c.reverse();
        Poly::new(c)
    };
    let g = RationalMap::new(rev(&f.num), rev(&f.den))?;
    let crit_g = critical_polynomial(&g)?;
    let at_inf = crit_g.coeffs().iter().take_while(|c| c.is_zero()).count();
    Ok(crit.degree().unwrap_or(0) + at_inf)
}

/// `φ` with `f̄ = φ ∘ f`, when it exists. Solves
/// `q̄·(a p + b q) = p̄·(c p + d q)` as a linear system in `(a, b, c, d)`.
pub fn mobius_realifiable(f: &RationalMap) -> Result<Option<MobiusTransform>> {
    if f.is_constant() {
        return domain("constant map");
    }
    let (p, q) = (&f.num, &f.den);
    let (pb, qb) = (p.conj(), q.conj());
    let cols = [qb.mul(p), qb.mul(q), pb.mul(p).neg(), pb.mul(q).neg()];
    let len = cols.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
    let rows: Vec<Vec<GaussianRational>> = (0..len).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect();
    let kernel = nullspace(&rows, 4);
    for v in kernel {
        let phi = MobiusTransform { a: v[0].clone(), b: v[1].clone(), c: v[2].clone(), d: v[3].clone() };
        if phi.determinant().is_zero() {
            continue;
        }
        let phi = phi.normalized();
        if !phi.conj().compose(&phi).is_identity() {
            return domain("realifying transformation is not an involution");
        }
        return Ok(Some(phi));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalImage {
    /// Bidegree `(δ, δ)` of the reduced image curve.
    pub delta: usize,
    pub map_degree: usize,
    /// Degree of the source onto the image, `d / δ`.
    pub covering_degree: usize,
}

/// Degree of the square-free part of `x ↦ Res_t(p − x q, p̄ − y₀ q̄)`,
/// maximised over enough specialisations `y₀` to avoid the finitely many
/// degenerate ones.
fn reduced_degree_in_first(p: &RationalPolynomial, q: &RationalPolynomial, pb: &RationalPolynomial, qb: &RationalPolynomial, d: usize) -> usize {
    let samples = 2 * d * d + d + 2;
    let xs: Vec<GaussianRational> = (0..=d as i64).map(|k| GaussianRational::from_ints(k, 0)).collect();
    let mut best = 0;
    for s in 0..samples as i64 {
        let y0 = GaussianRational::from_ints(s, 0);
        let b = pb.sub(&qb.scale(&y0));
        let ys: Vec<GaussianRational> = xs
            .iter()
            .map(|x| {
                let a = p.sub(&q.scale(x));
                resultant(&a, d, &b, d)
            })
            .collect();
        let r = interpolate(&xs, &ys);
        if r.is_zero() {
            continue;
        }
        best = best.max(r.square_free_part().degree().unwrap_or(0));
        if best == d {
            break;
        }
    }
    best
}

/// Bidegree of the image of `t ↦ (f(t), f̄(t))`, from the resultant eliminating `t`.
pub fn diagonal_image_bidegree(f: &RationalMap) -> Result<DiagonalImage> {
    if f.is_constant() {
        return domain("constant map");
    }
    let d = f.degree();
    let (p, q) = (&f.num, &f.den);
    let (pb, qb) = (p.conj(), q.conj());
    let dx = reduced_degree_in_first(p, q, &pb, &qb, d);
    let dy = reduced_degree_in_first(&pb, &qb, p, q, d);
    if dx != dy || dx == 0 || d % dx != 0 {
        return domain(format!("inconsistent image bidegree ({dx},{dy}) for degree {d}"));
    }
    Ok(DiagonalImage { delta: dx, map_degree: d, covering_degree: d / dx })
}

/// Whether all roots of the Wronskian of a real curve are real.
pub fn flattening_points_all_real(curve: &[RationalPolynomial]) -> Result<bool> {
    if curve.len() < 2 {
        return domain("a curve needs at least two coordinates");
    }
    let real: Vec<RealPolynomial> = curve
        .iter()
        .map(|p| p.to_real().ok_or_else(|| Error::Domain("curve coordinates must be real".into())))
        .collect::<Result<_>>()?;
    let w = wronskian(&real)?;
    if w.is_zero() {
        return domain("Wronskian vanishes identically (degenerate curve)");
    }
    let sf = w.square_free_part();
    Ok(real_root_count(&sf)? == sf.degree().unwrap_or(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Genericity {
    /// Simple critical points with pairwise distinct critical values.
    Generic,
    RepeatedCriticalPoint,
    RepeatedCriticalValue,
}

/// Checks that critical points are simple and critical values distinct,
/// symbolically: the values are the roots of `V(w) = Res_t(P(t), p(t) − w q(t))`.
pub fn critical_genericity(f: &RationalMap) -> Result<Genericity> {
    let crit = critical_polynomial(f)?;
    let at_inf = critical_multiplicity_at_infinity(f, &crit);
    if crit.square_free_part().degree() != crit.degree() || at_inf > 1 {
        return Ok(Genericity::RepeatedCriticalPoint);
    }
    let (p, q) = (&f.num, &f.den);
    let d = f.degree();
    let m = crit.degree().unwrap_or(0);
    // critical points that are poles all share the value ∞
    let poles = crit.gcd(q).degree().unwrap_or(0);
    let inf_value_at_inf = at_inf == 1 && q.degree().unwrap_or(0) < p.degree().unwrap_or(0);
    if poles + usize::from(inf_value_at_inf) > 1 {
        return Ok(Genericity::RepeatedCriticalValue);
    }
    if m > 0 {
        let ws: Vec<GaussianRational> = (0..=m as i64).map(|k| GaussianRational::from_ints(k, 0)).collect();
        let vs: Vec<GaussianRational> = ws.iter().map(|w| resultant(&crit, m, &p.sub(&q.scale(w)), d)).collect();
        let v = interpolate(&ws, &vs);
        if !v.is_zero() && v.square_free_part().degree() != v.degree() {
            return Ok(Genericity::RepeatedCriticalValue);
        }
        if at_inf == 1 && !inf_value_at_inf && !v.is_zero() {
            // finite value at ∞: p_d / q_d
            let val = p.coeff(d) / q.coeff(d);
            if v.eval(&val).is_zero() {
                return Ok(Genericity::RepeatedCriticalValue);
            }
        }
    }
    Ok(Genericity::Generic)
}
