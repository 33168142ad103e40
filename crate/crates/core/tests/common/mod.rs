#![allow(dead_code)]

use latglue::exact::{rat, IntegerMatrix};
use latglue::lattice::Lattice;
use latglue::wronskian::{GaussianRational, MobiusTransform, Poly, RationalMap, RationalPolynomial, RealPolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Counts vectors of norm −2 by brute force over the box `|x_i| <= bound_i`.
pub fn box_root_count(l: &Lattice, bounds: &[i64]) -> usize {
    let g = l.gram().to_i64().expect("small Gram");
    let n = g.len();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    let mut count = 0;
    loop {
        let mut norm = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                norm += x[i] * g[i][j] * x[j];
            }
        }
        if norm == -2 {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            if x[i] < bounds[i] {
                x[i] += 1;
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

/// Coefficients of the highest root: every root lies in this box.
pub fn highest_root_box(name: &str) -> Vec<i64> {
    match name {
        "A2" => vec![1, 1],
        "D4" => vec![1, 2, 1, 1],
        "E6" => vec![1, 2, 2, 3, 2, 1],
        "E7" => vec![2, 2, 3, 4, 3, 2, 1],
        "E8" => vec![2, 3, 4, 6, 5, 4, 3, 2],
        _ => panic!("no box for {name}"),
    }
}

/// Random nondegenerate even Gram matrix of rank `n`.
pub fn random_even_lattice<R: Rng>(rng: &mut R, n: usize) -> Lattice {
    loop {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * rng.gen_range(-3..=3);
            for j in i + 1..n {
                let v = rng.gen_range(-2..=2);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        let l = Lattice::from_i64(&g, "random").unwrap();
        if l.is_nondegenerate() {
            return l;
        }
    }
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, range: i64) -> IntegerMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-range..=range)).collect()).collect();
    IntegerMatrix::from_i64(&data)
}

pub fn random_real_poly<R: Rng>(rng: &mut R, degree: usize) -> RealPolynomial {
    let mut c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-5..=5)).collect();
    if c[degree] == 0 {
        c[degree] = 1;
    }
    Poly::from_i64(&c)
}

fn random_gaussian<R: Rng>(rng: &mut R) -> GaussianRational {
    GaussianRational::new(rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)), rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
}

fn random_complex_poly<R: Rng>(rng: &mut R, degree: usize) -> RationalPolynomial {
    let mut c: Vec<GaussianRational> = (0..=degree).map(|_| random_gaussian(rng)).collect();
    if c[degree].is_zero() {
        c[degree] = GaussianRational::from_ints(1, 1);
    }
    Poly::new(c)
}

/// A nonconstant map of degree at most `max_degree`: a real map, a real map
/// followed by a Möbius transformation, a real map precomposed with a complex
/// scaling, or a map with arbitrary Gaussian coefficients.
pub fn random_gaussian_map<R: Rng>(rng: &mut R, max_degree: usize) -> RationalMap {
    loop {
        let d = rng.gen_range(1..=max_degree);
        let dq = rng.gen_range(0..=d);
        let real_pair = |rng: &mut R| {
            (
                Poly::from_real(&random_real_poly(rng, d)),
                Poly::from_real(&random_real_poly(rng, dq)),
            )
        };
        let candidate = match rng.gen_range(0..4) {
            0 => {
                let (p, q) = real_pair(rng);
                RationalMap::new(p, q)
            }
            1 => {
                let (p, q) = real_pair(rng);
                let phi = MobiusTransform { a: random_gaussian(rng), b: random_gaussian(rng), c: random_gaussian(rng), d: random_gaussian(rng) };
                RationalMap::new(p, q).and_then(|g| phi.apply(&g))
            }
            2 => {
                let (p, q) = real_pair(rng);
                let lambda = random_gaussian(rng);
                let sub = |f: &RationalPolynomial| {
                    let mut pow = GaussianRational::from_ints(1, 0);
                    let mut out = Vec::new();
                    for c in f.coeffs() {
                        out.push(c.clone() * pow.clone());
                        pow = pow * lambda.clone();
                    }
                    Poly::new(out)
                };
                RationalMap::new(sub(&p), sub(&q))
            }
            _ => RationalMap::new(random_complex_poly(rng, d), random_complex_poly(rng, dq)),
        };
        if let Ok(f) = candidate {
            if !f.is_constant() {
                return f;
            }
        }
    }
}

/// Number of distinct real roots from discriminant signs, for degree ≤ 4.
/// Works on the square-free part so that the discriminant is nonzero.
pub fn discriminant_sign_real_roots(p: &RealPolynomial) -> usize {
    let q = p.square_free_part();
    let c = |i: usize| q.coeff(i);
    let pos = |x: &BigRational| x.is_positive();
    let neg = |x: &BigRational| x.is_negative();
    match q.degree().unwrap_or(0) {
        0 => 0,
        1 => 1,
        2 => {
            let (a, b, cc) = (c(2), c(1), c(0));
            let disc = &b * &b - rat(4, 1) * a * cc;
            if pos(&disc) {
                2
            } else {
                0
            }
        }
        3 => {
            let (a, b, cc, d) = (c(3), c(2), c(1), c(0));
            let disc = rat(18, 1) * &a * &b * &cc * &d - rat(4, 1) * &b * &b * &b * &d + &b * &b * &cc * &cc
                - rat(4, 1) * &a * &cc * &cc * &cc
                - rat(27, 1) * &a * &a * &d * &d;
            if pos(&disc) {
                3
            } else {
                1
            }
        }
        4 => {
            let (a, b, cc, d, e) = (c(4), c(3), c(2), c(1), c(0));
            let r = |n: i64| BigRational::from_integer(BigInt::from(n));
            let disc = r(256) * &a * &a * &a * &e * &e * &e - r(192) * &a * &a * &b * &d * &e * &e
                - r(128) * &a * &a * &cc * &cc * &e * &e
                + r(144) * &a * &a * &cc * &d * &d * &e
                - r(27) * &a * &a * &d * &d * &d * &d
                + r(144) * &a * &b * &b * &cc * &e * &e
                - r(6) * &a * &b * &b * &d * &d * &e
                - r(80) * &a * &b * &cc * &cc * &d * &e
                + r(18) * &a * &b * &cc * &d * &d * &d
                + r(16) * &a * &cc * &cc * &cc * &cc * &e
                - r(4) * &a * &cc * &cc * &cc * &d * &d
                - r(27) * &b * &b * &b * &b * &e * &e
                + r(18) * &b * &b * &b * &cc * &d * &e
                - r(4) * &b * &b * &b * &d * &d * &d
                - r(4) * &b * &b * &cc * &cc * &cc * &e
                + &b * &b * &cc * &cc * &d * &d;
            let pp = r(8) * &a * &cc - r(3) * &b * &b;
            let dd = r(64) * &a * &a * &a * &e - r(16) * &a * &a * &cc * &cc + r(16) * &a * &b * &b * &cc
                - r(16) * &a * &a * &b * &d
                - r(3) * &b * &b * &b * &b;
            if neg(&disc) {
                2
            } else if neg(&pp) && neg(&dd) {
                4
            } else {
                0
            }
        }
        n => panic!("oracle covers degree <= 4, got {n}"),
    }
}

/// Polynomials of degree ≤ 4: random ones plus products of rational linear
/// factors, so that every root configuration shows up.
pub fn sturm_corpus<R: Rng>(rng: &mut R, count: usize) -> Vec<RealPolynomial> {
    let mut out = Vec::new();
    for k in 0..count {
        let d = 1 + k % 4;
        if k % 2 == 0 {
            out.push(random_real_poly(rng, d));
        } else {
            let mut p = Poly::from_i64(&[1]);
            let mut remaining = d;
            while remaining > 0 {
                let f = if remaining >= 2 && rng.gen_bool(0.3) {
                    // irreducible quadratic factor
                    remaining -= 2;
                    Poly::from_i64(&[rng.gen_range(1..=3), 0, 1])
                } else {
                    remaining -= 1;
                    Poly::new(vec![rat(-rng.gen_range(-3..=3), rng.gen_range(1..=2)), rat(1, 1)])
                };
                p = p.mul(&f);
            }
            out.push(p);
        }
    }
    out
}
