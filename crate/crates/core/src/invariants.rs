//! Assembly of Gromov-Witten invariants and instanton numbers.
//!
//! The invariant of a complete intersection of type `(d_1,...,d_k)` at curve
//! degree `d` is a sum over every fixed-point graph of the product of the
//! `k` contribution-bundle Chern classes divided by `a_Γ e^T(N_Γ)`. The sum
//! is an exact rational and does not depend on the torus weights, so a
//! degenerate specialization is retried with the next built-in strategy
//! rather than failing the computation.
//!
//! Summation runs as a parallel reduction over the graph stream; exact
//! rational addition is associative and commutative, so any partition of
//! the work yields a bit-identical result.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::{count_fixed_graphs, decorated_shapes, FixedGraph};
use crate::localization::{chunked_tasks, Evaluator, WeightStrategy, WeightVector};
use crate::rational::Rational;

/// Largest curve degree the standard pipeline runs without an explicit
/// override: beyond this the identification of instanton numbers with
/// curve counts is no longer asserted, and runtimes grow steeply.
pub const DEFAULT_MAX_DEGREE: u32 = 6;

/// Type `(d_1,...,d_k)` of a Calabi-Yau complete-intersection threefold in
/// `P^{k+3}`: degrees non-increasing, all at least 2, summing to `k + 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CYType {
    degrees: Vec<u32>,
}

impl CYType {
    /// Validates membership in the five-type catalog; the input degree list
    /// may be given in any order.
    pub fn new(mut degrees: Vec<u32>) -> Result<Self> {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let candidate = CYType { degrees };
        if cy_types().contains(&candidate) {
            Ok(candidate)
        } else {
            Err(Error::InvalidType(format!(
                "({}) is not a Calabi-Yau complete-intersection threefold type",
                candidate
                    .degrees
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )))
        }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Number of hypersurfaces cut down, `k`.
    pub fn codimension(&self) -> usize {
        self.degrees.len()
    }

    /// Dimension of the ambient projective space, `k + 3`.
    pub fn ambient_dim(&self) -> usize {
        self.degrees.len() + 3
    }
}

impl std::fmt::Display for CYType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.degrees
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// The five Calabi-Yau complete-intersection threefold types in projective
/// space: (5), (4,2), (3,3), (3,2,2), (2,2,2,2).
pub fn cy_types() -> Vec<CYType> {
    [
        vec![5],
        vec![4, 2],
        vec![3, 3],
        vec![3, 2, 2],
        vec![2, 2, 2, 2],
    ]
    .into_iter()
    .map(|degrees| CYType { degrees })
    .collect()
}

/// Dimension of the space of `n`-pointed degree-`d` stable maps to `P^r`:
/// `rd + r + d + n - 3`.
pub fn moduli_dim(r: u64, d: u64, n: u64) -> u64 {
    assert!(r >= 1 && d >= 1);
    r * d + r + d + n - 3
}

/// What a report counts curves on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// A complete intersection from the Calabi-Yau catalog.
    CompleteIntersection(CYType),
    /// A general hypersurface of the given degree (not necessarily
    /// Calabi-Yau), as used by the line count.
    Hypersurface { degree: u32 },
}

/// One computed invariant with its provenance.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    /// Ambient projective dimension.
    pub r: usize,
    /// Curve degree `d`.
    pub degree: u32,
    pub target: Target,
    /// The Gromov-Witten invariant `N_d`, exact.
    pub gw: Rational,
    /// The instanton number, when inversion was applied.
    pub instanton: Option<BigInt>,
    /// Number of (decorated shape, labeling) pairs summed.
    pub graph_count: u64,
    /// Strategy that actually produced the value (after any fallback).
    pub weight_strategy: WeightStrategy,
    pub elapsed: Duration,
}

/// Bott sum for one weight vector, without fallback: the exact sum over all
/// fixed-point graphs of `(Π_i c^T(V^{(d_i)}))/(a_Γ e^T(N_Γ))`.
pub fn bott_sum(r: usize, d: u32, factor_degrees: &[u32], w: &WeightVector) -> Result<Rational> {
    if w.r() != r {
        return Err(Error::InvalidWeights(format!(
            "weight vector has {} entries but r = {r} needs {}",
            w.r() + 1,
            r + 1
        )));
    }
    if factor_degrees.is_empty() || factor_degrees.contains(&0) {
        return Err(Error::InvalidInput(
            "factor degrees must be positive".into(),
        ));
    }
    assert!(r >= 1 && d >= 1);
    let shapes = decorated_shapes(d);
    let ev = Evaluator::new(w, d, factor_degrees);
    let tasks = chunked_tasks(&shapes, r, 1024);
    tasks
        .into_par_iter()
        .map(|(si, range)| {
            let shape = &shapes[si];
            let mut terms = Vec::with_capacity((range.end - range.start) as usize);
            shape.for_each_labeling_in(r, range, |labels| match ev.summand_raw(shape, labels) {
                Ok(t) => {
                    terms.push(t);
                    Ok(())
                }
                Err(factor) => Err(Error::DegenerateWeights {
                    graph: FixedGraph::new(shape, labels.to_vec(), r)
                        .expect("enumerated labelings are valid")
                        .catalog_line(),
                    factor,
                }),
            })?;
            Ok(tree_sum(terms))
        })
        .try_reduce(Rational::zero, |a, b| Ok(a + b))
        // Leaves arrive unreduced from the evaluator; merging reduces them,
        // but a sum of a single chunk may slip through untouched.
        .map(|total| total.reduced())
}

/// Pairwise merge: keeps the operands of each addition balanced in size,
/// which matters once partial sums accumulate large denominators.
fn tree_sum(mut terms: Vec<Rational>) -> Rational {
    if terms.is_empty() {
        return Rational::zero();
    }
    while terms.len() > 1 {
        let mut out = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => out.push(a + b),
                None => out.push(a),
            }
        }
        terms = out;
    }
    terms.pop().expect("nonempty")
}

/// The Gromov-Witten invariant for hypersurface degrees `factor_degrees` in
/// `P^r` at curve degree `d`, falling back across weight strategies if the
/// requested specialization turns out degenerate.
pub fn gw_invariant(
    r: usize,
    d: u32,
    factor_degrees: &[u32],
    w: &WeightVector,
) -> Result<Rational> {
    gw_invariant_tracked(r, d, factor_degrees, w).map(|(value, _)| value)
}

/// Like [`gw_invariant`], also reporting which strategy produced the value.
pub fn gw_invariant_tracked(
    r: usize,
    d: u32,
    factor_degrees: &[u32],
    w: &WeightVector,
) -> Result<(Rational, WeightStrategy)> {
    let mut last_degenerate = None;
    for candidate in fallback_chain(w, r) {
        match bott_sum(r, d, factor_degrees, &candidate) {
            Ok(value) => return Ok((value, candidate.strategy())),
            Err(e @ Error::DegenerateWeights { .. }) => last_degenerate = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_degenerate.expect("fallback chain is never empty"))
}

fn fallback_chain(w: &WeightVector, r: usize) -> Vec<WeightVector> {
    let mut chain = vec![w.clone()];
    for strategy in [WeightStrategy::Pow10, WeightStrategy::Primes] {
        if w.strategy() != strategy {
            chain.push(WeightVector::for_strategy(strategy, r).expect("built-in strategy"));
        }
    }
    chain
}

/// Quintic-threefold invariant `N_d`: the degree-`(5d+1)` integral over the
/// space of degree-`d` stable maps to `P^4`. Intended for `1 <= d <= 6`;
/// higher degrees compute the same sum but get expensive quickly.
pub fn quintic_n(d: u32) -> Result<Rational> {
    gw_invariant(4, d, &[5], &WeightVector::pow10(4))
}

/// Multiple-cover inversion `N_d = Σ_{k|d} ñ_{d/k} / k³`, solved for the
/// instanton numbers `ñ_d` in increasing degree. Every `ñ_d` is checked to
/// be an integer; a violation signals an upstream bug.
pub fn instanton_numbers(gw: &[Rational]) -> Result<Vec<BigInt>> {
    let mut tilde: Vec<BigInt> = Vec::with_capacity(gw.len());
    for d in 1..=gw.len() as u32 {
        let mut value = gw[d as usize - 1].clone();
        for k in 2..=d {
            if d % k == 0 {
                value -= Rational::new(
                    tilde[(d / k) as usize - 1].clone(),
                    BigInt::from(k).pow(3u32),
                );
            }
        }
        if !value.is_integer() {
            return Err(Error::IntegralityViolation {
                degree: d,
                value: value.to_string(),
            });
        }
        tilde.push(value.to_integer());
    }
    Ok(tilde)
}

/// Number of lines on a general degree-`(2r-3)` hypersurface in `P^r`,
/// by the closed-form sum over ordered label pairs:
/// `Σ_{i<j} Π_{a+b=2r-3}(aλ_i + bλ_j) / Π_{k≠i,j}(λ_i-λ_k)(λ_j-λ_k)`.
pub fn lines_closed_form(r: usize, w: &WeightVector) -> Result<Rational> {
    if r < 2 {
        return Err(Error::InvalidInput(format!(
            "need r >= 2 for a line count, got {r}"
        )));
    }
    if w.r() != r {
        return Err(Error::InvalidWeights(format!(
            "weight vector has {} entries but r = {r} needs {}",
            w.r() + 1,
            r + 1
        )));
    }
    let m = 2 * r as u32 - 3;
    let lam = w.weights();
    let mut total = Rational::zero();
    for i in 0..=r {
        for j in i + 1..=r {
            let mut num = Rational::from_integer(BigInt::from(1));
            for a in 0..=m {
                let b = m - a;
                num *= Rational::from_integer(BigInt::from(a)) * &lam[i]
                    + Rational::from_integer(BigInt::from(b)) * &lam[j];
            }
            let mut den = Rational::from_integer(BigInt::from(1));
            for (k, lam_k) in lam.iter().enumerate() {
                if k != i && k != j {
                    den *= (&lam[i] - lam_k) * (&lam[j] - lam_k);
                }
            }
            total += num / den;
        }
    }
    Ok(total)
}

/// Invariants `N_1..N_max_d` for a catalog type, with instanton inversion.
/// One report per degree; each carries its own run time.
pub fn cicy_reports(ty: &CYType, max_d: u32, w: &WeightVector) -> Result<Vec<InvariantReport>> {
    assert!(max_d >= 1);
    let r = ty.ambient_dim();
    let mut values = Vec::with_capacity(max_d as usize);
    let mut meta = Vec::with_capacity(max_d as usize);
    for d in 1..=max_d {
        let start = Instant::now();
        let (value, strategy) = gw_invariant_tracked(r, d, ty.degrees(), w)?;
        meta.push((strategy, start.elapsed()));
        values.push(value);
    }
    let instanton = instanton_numbers(&values)?;
    Ok(values
        .into_iter()
        .zip(instanton)
        .zip(meta)
        .enumerate()
        .map(|(idx, ((gw, n), (weight_strategy, elapsed)))| {
            let d = idx as u32 + 1;
            InvariantReport {
                r,
                degree: d,
                target: Target::CompleteIntersection(ty.clone()),
                gw,
                instanton: Some(n),
                graph_count: count_fixed_graphs(r, d),
                weight_strategy,
                elapsed,
            }
        })
        .collect())
}

/// Line count on a general degree-`(2r-3)` hypersurface in `P^r` as a
/// report. Uses the closed form; the count is checked to be an integer.
pub fn lines_report(r: usize, w: &WeightVector) -> Result<InvariantReport> {
    let start = Instant::now();
    let value = lines_closed_form(r, w)?;
    let n = instanton_numbers(std::slice::from_ref(&value))?.pop();
    Ok(InvariantReport {
        r,
        degree: 1,
        target: Target::Hypersurface {
            degree: 2 * r as u32 - 3,
        },
        gw: value,
        instanton: n,
        graph_count: count_fixed_graphs(r, 1),
        weight_strategy: w.strategy(),
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn catalog_has_exactly_five_types() {
        let types = cy_types();
        assert_eq!(types.len(), 5);
        let expect: Vec<(Vec<u32>, usize)> = vec![
            (vec![5], 4),
            (vec![4, 2], 5),
            (vec![3, 3], 5),
            (vec![3, 2, 2], 6),
            (vec![2, 2, 2, 2], 7),
        ];
        for (ty, (degrees, r)) in types.iter().zip(expect) {
            assert_eq!(ty.degrees(), degrees);
            assert_eq!(ty.ambient_dim(), r);
            let k = ty.codimension() as u32;
            assert_eq!(ty.degrees().iter().sum::<u32>(), k + 4);
        }
    }

    #[test]
    fn cy_type_validation() {
        assert_eq!(CYType::new(vec![2, 4]).unwrap().degrees(), [4, 2]);
        assert!(CYType::new(vec![5, 2]).is_err());
        assert!(CYType::new(vec![6]).is_err());
        assert!(CYType::new(vec![]).is_err());
        assert!(CYType::new(vec![2, 2, 2, 2, 2]).is_err());
    }

    #[test]
    fn moduli_dim_formula() {
        assert_eq!(moduli_dim(4, 1, 0), 6);
        for d in 1..=6 {
            assert_eq!(moduli_dim(4, d, 0), 5 * d + 1);
        }
        assert_eq!(moduli_dim(1, 1, 0), 0);
        assert_eq!(moduli_dim(2, 3, 4), 12);
    }

    #[test]
    fn instanton_inversion_base_cases() {
        assert_eq!(
            instanton_numbers(&[int(2875)]).unwrap(),
            vec![BigInt::from(2875)]
        );
        // N_2 = n_1/8 + n_2.
        let ns = instanton_numbers(&[int(2875), ratio(4876875, 8)]).unwrap();
        assert_eq!(ns, vec![BigInt::from(2875), BigInt::from(609250)]);
        match instanton_numbers(&[ratio(1, 2)]) {
            Err(Error::IntegralityViolation { degree: 1, .. }) => {}
            other => panic!("expected integrality violation, got {other:?}"),
        }
    }

    #[test]
    fn degree_one_invariants_match_line_counts() {
        for (ty, expect) in cy_types().iter().zip([2875i64, 1280, 1053, 720, 512]) {
            let r = ty.ambient_dim();
            let w = WeightVector::pow10(r);
            let value = gw_invariant(r, 1, ty.degrees(), &w).unwrap();
            assert_eq!(value, int(expect), "type {ty}");
        }
    }

    #[test]
    fn quintic_low_degrees() {
        assert_eq!(quintic_n(1).unwrap(), int(2875));
        assert_eq!(quintic_n(2).unwrap(), ratio(4876875, 8));
    }

    #[test]
    fn weight_choice_does_not_change_the_sum() {
        let pow = bott_sum(4, 2, &[5], &WeightVector::pow10(4)).unwrap();
        let pri = bott_sum(4, 2, &[5], &WeightVector::primes(4)).unwrap();
        assert_eq!(pow, pri);
    }

    #[test]
    fn mismatched_weight_length_rejected() {
        let w = WeightVector::pow10(3);
        assert!(matches!(
            bott_sum(4, 1, &[5], &w),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            lines_closed_form(4, &w),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn lines_small_dimensions() {
        assert_eq!(
            lines_closed_form(2, &WeightVector::pow10(2)).unwrap(),
            int(1)
        );
        assert_eq!(
            lines_closed_form(3, &WeightVector::pow10(3)).unwrap(),
            int(27)
        );
        assert_eq!(
            lines_closed_form(4, &WeightVector::pow10(4)).unwrap(),
            int(2875)
        );
    }

    #[test]
    fn reports_carry_graph_counts_and_inversion() {
        let ty = CYType::new(vec![5]).unwrap();
        let reports = cicy_reports(&ty, 2, &WeightVector::pow10(4)).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].graph_count, 20);
        assert_eq!(reports[1].graph_count, 100);
        assert_eq!(reports[1].gw, ratio(4876875, 8));
        assert_eq!(reports[1].instanton, Some(BigInt::from(609250)));
        assert_eq!(reports[0].weight_strategy, WeightStrategy::Pow10);
    }
}
