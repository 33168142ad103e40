//! Counting arguments for meromorphic functions with all critical points real:
//! critical-point and cusp counts, genus bounds and the case split over the
//! bidegree `(δ,δ)` of the image of `(f, f̄)` on the ellipsoid.
//!
//! Everything is exact integer arithmetic. The only inequality that could
//! look fractional, `g > (d²−4d+3)/3`, is evaluated as `3g > d²−4d+3`.
//!
//! A lower threshold on the number of real critical points that forces
//! reality in degree 3 is not exposed as an operation; only the bound
//! `g + k ≤ (d−1)²` behind it is.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};

/// `2d − 2 + 2g`.
pub fn critical_point_count(g: u64, d: u64) -> u64 {
    (2 * d + 2 * g).saturating_sub(2)
}

/// Arithmetic genus `(d−1)²` of a curve of bidegree `(d,d)`.
pub fn adjunction_genus(d: u64) -> u64 {
    let e = d.saturating_sub(1);
    e * e
}

/// Genus drop `⌈(k−1)/2⌉` of a cusp `y² = xᵏ`.
pub fn cusp_genus_contribution(k: u64) -> Result<u64> {
    if k < 3 {
        return domain(format!("cusp type y^2 = x^{k} needs k >= 3"));
    }
    Ok(k / 2)
}

/// `g + k ≤ (d−1)²`.
pub fn birational_bound_holds(g: u64, k: u64, d: u64) -> bool {
    g + k <= adjunction_genus(d)
}

/// `3g > d² − 4d + 3`.
pub fn sqrt_bound_holds(g: u64, d: u64) -> bool {
    let d = d as i128;
    3 * g as i128 > d * d - 4 * d + 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ramification {
    pub value: i64,
    /// `false` when the value is negative, i.e. no such covering exists.
    pub consistent: bool,
}

/// Riemann–Hurwitz ramification `2g_C − 2 − δ(2g_D − 2)` of a degree-`δ` cover `C → D`.
pub fn rh_ramification(g_c: u64, g_d: u64, delta: u64) -> Ramification {
    let value = 2 * g_c as i64 - 2 - delta as i64 * (2 * g_d as i64 - 2);
    Ramification { value, consistent: value >= 0 }
}

/// Cusps of a bidegree `(d,d)` image curve with normalization of genus `g_d`: `2g_d − 2 + 2d`.
pub fn cusp_count_general(g_d: u64, d: u64) -> u64 {
    critical_point_count(g_d, d)
}

/// One branch of the analysis: `f` of degree `d = δ·∂` on a genus-`g` curve,
/// factoring through a genus-`g̃` normalization of a `(δ,δ)` image curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveCase {
    pub genus: u64,
    pub degree: u64,
    pub delta: u64,
    pub covering_degree: u64,
    pub real_critical_points: u64,
    pub image_genus: u64,
}

impl CurveCase {
    pub fn new(genus: u64, degree: u64, delta: u64, real_critical_points: u64, image_genus: u64) -> Result<Self> {
        if delta == 0 || degree % delta != 0 {
            return domain(format!("delta = {delta} does not divide d = {degree}"));
        }
        if real_critical_points > critical_point_count(genus, degree) {
            return domain("more real critical points than critical points");
        }
        Ok(Self { genus, degree, delta, covering_degree: degree / delta, real_critical_points, image_genus })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RealStructure,
    ExcludedByCount,
    ReducesToCuspCurve,
    OutOfScopeReference,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::RealStructure => "real-structure",
            Verdict::ExcludedByCount => "excluded-by-count",
            Verdict::ReducesToCuspCurve => "reduces-to-cusp-curve",
            Verdict::OutOfScopeReference => "out-of-scope-reference",
        })
    }
}

/// A required inequality `lhs ≤ rhs` with its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub relation: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl Inequality {
    fn at_most(relation: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self { relation: relation.into(), lhs, rhs, holds: lhs <= rhs }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.holds { "<=" } else { ">" };
        write!(f, "{}: {} {op} {}", self.relation, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseVerdict {
    pub bidegree: (u64, u64),
    pub verdict: Verdict,
    /// The branch data when a single branch is meant (real structure, or a surviving image genus).
    pub case: Option<CurveCase>,
    /// Cusps the image curve must carry in the surviving branch.
    pub cusps: Option<u64>,
    pub witness: Vec<Inequality>,
    pub note: Option<String>,
}

impl fmt::Display for CaseVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) {}", self.bidegree.0, self.bidegree.1, self.verdict)?;
        if let Some(c) = &self.case {
            if self.verdict == Verdict::ReducesToCuspCurve && c.delta != c.degree {
                write!(f, ", image genus {}", c.image_genus)?;
            }
        }
        if let Some(k) = self.cusps {
            write!(f, ", k = {k}")?;
        }
        for w in &self.witness {
            write!(f, "; {w}")?;
        }
        if let Some(n) = &self.note {
            write!(f, "; {n}")?;
        }
        Ok(())
    }
}

fn divisors(d: u64) -> Vec<u64> {
    (1..=d).filter(|x| d % x == 0).collect()
}

/// Case split for degree `d` and source genus `g`, assuming all
/// `2d − 2 + 2g` critical points are real, over the divisors `δ` of `d`.
///
/// * `δ = 1`: the image is a graph, `f` is real for some real structure on the target.
/// * `δ = d`: the source maps birationally, so `g + k ≤ (d−1)²` with `k = 2d−2+2g`.
/// * otherwise: the image curve needs `2g̃−2+2δ` cusps with `g̃ + cusps ≤ (δ−1)²`,
///   checked for every `g̃ ≤ (δ−1)²`.
pub fn case_analysis(d: u64, g: u64) -> Result<Vec<CaseVerdict>> {
    if d == 0 {
        return domain("degree must be positive");
    }
    let k = critical_point_count(g, d);
    let mut out = Vec::new();
    for delta in divisors(d) {
        if delta == 1 {
            out.push(CaseVerdict {
                bidegree: (1, 1),
                verdict: Verdict::RealStructure,
                case: Some(CurveCase::new(g, d, 1, k, 0)?),
                cusps: None,
                witness: vec![],
                note: None,
            });
        } else if delta == d {
            let bound = Inequality::at_most("g + k <= (d-1)^2", (g + k) as i64, adjunction_genus(d) as i64);
            let verdict = if !bound.holds {
                Verdict::ExcludedByCount
            } else if g == 0 {
                Verdict::OutOfScopeReference
            } else {
                Verdict::ReducesToCuspCurve
            };
            let note = (verdict == Verdict::OutOfScopeReference)
                .then(|| "genus 0 is settled by separate work on rational functions".to_string());
            out.push(CaseVerdict {
                bidegree: (d, d),
                verdict,
                case: Some(CurveCase::new(g, d, d, k, g)?),
                cusps: (verdict != Verdict::ExcludedByCount).then_some(k),
                witness: vec![bound],
                note,
            });
        } else {
            let top = adjunction_genus(delta);
            let mut failed = Vec::new();
            let mut survivors = Vec::new();
            for gt in 0..=top {
                let cusps = cusp_count_general(gt, delta);
                let w = Inequality::at_most(format!("g~ + cusps <= (delta-1)^2 at g~ = {gt}"), (gt + cusps) as i64, top as i64);
                if w.holds {
                    survivors.push((gt, cusps, w));
                } else {
                    failed.push(w);
                }
            }
            if survivors.is_empty() {
                // the inequality is tightest at g~ = 0
                out.push(CaseVerdict {
                    bidegree: (delta, delta),
                    verdict: Verdict::ExcludedByCount,
                    case: None,
                    cusps: None,
                    witness: failed.into_iter().take(1).collect(),
                    note: Some(format!("fails for every g~ in 0..={top}")),
                });
            }
            for (gt, cusps, w) in survivors {
                out.push(CaseVerdict {
                    bidegree: (delta, delta),
                    verdict: Verdict::ReducesToCuspCurve,
                    case: Some(CurveCase::new(g, d, delta, k, gt)?),
                    cusps: Some(cusps),
                    witness: vec![w],
                    note: None,
                });
            }
        }
    }
    Ok(out)
}

pub fn degree4_case_analysis(g: u64) -> Vec<CaseVerdict> {
    case_analysis(4, g).expect("degree 4 is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        assert_eq!(critical_point_count(1, 4), 8);
        assert_eq!(critical_point_count(0, 1), 0);
        assert_eq!(critical_point_count(0, 2), 2);
        assert_eq!(adjunction_genus(4), 9);
        assert_eq!(adjunction_genus(1), 0);
        assert_eq!(adjunction_genus(3), 4);
        assert_eq!(cusp_count_general(1, 4), 8);
        assert_eq!(cusp_count_general(0, 2), 2);
        assert_eq!(cusp_count_general(0, 1), 0);
    }

    #[test]
    fn cusp_contributions() {
        assert_eq!(cusp_genus_contribution(3).unwrap(), 1);
        assert_eq!(cusp_genus_contribution(4).unwrap(), 2);
        assert_eq!(cusp_genus_contribution(5).unwrap(), 2);
        assert!(cusp_genus_contribution(2).is_err());
    }

    #[test]
    fn bounds() {
        assert!(birational_bound_holds(1, 8, 4));
        assert!(!birational_bound_holds(1, 8, 3));
        assert!(birational_bound_holds(0, 0, 1));
        assert!(sqrt_bound_holds(1, 3));
        assert!(!sqrt_bound_holds(1, 4));
        assert!(!sqrt_bound_holds(0, 1));
    }

    #[test]
    fn ramification() {
        assert_eq!(rh_ramification(1, 1, 2), Ramification { value: 0, consistent: true });
        assert_eq!(rh_ramification(1, 0, 2).value, 4);
        assert_eq!(rh_ramification(0, 0, 1).value, 0);
        assert!(!rh_ramification(0, 1, 2).consistent);
    }

    #[test]
    fn curve_case_validation() {
        assert!(CurveCase::new(1, 4, 3, 8, 0).is_err());
        assert!(CurveCase::new(1, 4, 2, 9, 0).is_err());
        assert_eq!(CurveCase::new(1, 4, 2, 8, 0).unwrap().covering_degree, 2);
    }

    #[test]
    fn degree_four_genus_one() {
        let v = degree4_case_analysis(1);
        let kinds: Vec<_> = v.iter().map(|c| (c.bidegree.0, c.verdict)).collect();
        assert_eq!(
            kinds,
            vec![(1, Verdict::RealStructure), (2, Verdict::ExcludedByCount), (4, Verdict::ReducesToCuspCurve)]
        );
        assert_eq!(v[2].cusps, Some(8));
        assert_eq!((v[1].witness[0].lhs, v[1].witness[0].rhs), (2, 1));
        assert!(v[2].to_string().contains("reduces-to-cusp-curve, k = 8"));
    }

    #[test]
    fn degree_four_other_genera() {
        assert_eq!(degree4_case_analysis(2)[2].verdict, Verdict::ExcludedByCount);
        assert_eq!(degree4_case_analysis(0)[2].verdict, Verdict::OutOfScopeReference);
    }

    #[test]
    fn degree_three_and_two() {
        for g in 1..=100 {
            let v = case_analysis(3, g).unwrap();
            assert_eq!(v.len(), 2);
            assert_eq!(v[1].verdict, Verdict::ExcludedByCount);
            let v = case_analysis(2, g).unwrap();
            assert_eq!(v[1].verdict, Verdict::ExcludedByCount);
            assert_eq!(v[1].witness[0].rhs, 1);
        }
    }

    #[test]
    fn composite_degree_with_surviving_intermediate_branch() {
        // delta = 3 with g~ = 0 needs 4 cusps on a (3,3) curve of arithmetic genus 4
        let v = case_analysis(6, 5).unwrap();
        assert!(v.iter().any(|c| c.bidegree == (3, 3) && c.verdict == Verdict::ReducesToCuspCurve && c.cusps == Some(4)));
        assert!(v.iter().any(|c| c.bidegree == (2, 2) && c.verdict == Verdict::ExcludedByCount));
    }

    proptest! {
        #[test]
        fn critical_and_cusp_counts_agree(g in 0u64..=50, d in 1u64..=50) {
            prop_assert_eq!(critical_point_count(g, d), cusp_count_general(g, d));
            prop_assert_eq!(critical_point_count(g, d), 2 * d - 2 + 2 * g);
        }

        #[test]
        fn bidegree_two_always_excluded(g in 0u64..1000) {
            let v = degree4_case_analysis(g);
            prop_assert_eq!(v[1].verdict, Verdict::ExcludedByCount);
        }

        #[test]
        fn sqrt_bound_kills_birational_branch(d in 1u64..=20, g in 0u64..=100) {
            if sqrt_bound_holds(g, d) {
                prop_assert!(!birational_bound_holds(g, critical_point_count(g, d), d));
            }
        }
    }
}
