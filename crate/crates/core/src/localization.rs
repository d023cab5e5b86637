//! Exact evaluation of the localization data at specialized torus weights.
//!
//! Every fixed-point graph contributes one summand to an invariant: an
//! equivariant top Chern class of the contribution bundle divided by
//! `a_Γ` times the equivariant Euler class of the normal bundle. Both
//! classes factor over the vertices and edges of the graph, so this module
//! exposes the per-graph pieces (`flag_weight`, `vertex_euler`,
//! `edge_euler`, `contribution_chern`) as readable formula transcriptions,
//! plus an [`Evaluator`] that precomputes every per-edge factor for a fixed
//! weight vector and evaluates whole summands out of table lookups.
//!
//! All arithmetic is exact; a vanishing denominator is reported as
//! [`Error::DegenerateWeights`] rather than ever being rounded around.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::graphs::{DecoratedShape, FixedGraph, Flag};
use crate::rational::Rational;

/// How the torus weights were chosen.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum WeightStrategy {
    /// `λ_i = 10^i`, the fast default.
    Pow10,
    /// Primes with power-of-ten spacing (2, 11, 101, ...), the fallback.
    Primes,
    /// Caller-supplied weights.
    Custom,
}

impl std::fmt::Display for WeightStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightStrategy::Pow10 => "pow10",
            WeightStrategy::Primes => "primes",
            WeightStrategy::Custom => "custom",
        })
    }
}

/// Torus weights `λ_0..λ_r`: pairwise distinct and nonzero.
#[derive(Clone, Debug)]
pub struct WeightVector {
    weights: Vec<Rational>,
    strategy: WeightStrategy,
}

impl WeightVector {
    /// `λ_i = 10^i` for `i = 0..=r`.
    pub fn pow10(r: usize) -> Self {
        assert!(r >= 1);
        let weights = (0..=r)
            .map(|i| Rational::from_integer(BigInt::from(10).pow(i as u32)))
            .collect();
        WeightVector {
            weights,
            strategy: WeightStrategy::Pow10,
        }
    }

    /// Prime weights with power-of-ten spacing: the smallest prime above
    /// `10^i` for each `i`, so 2, 11, 101, 1009, 10007, ...
    ///
    /// Slowly growing prime sequences admit small additive relations
    /// (3, 5, 7 is an arithmetic progression; 2·2 + 11 = 3·5) that make
    /// localization denominators vanish. Decade spacing keeps the small
    /// integer combinations appearing in those denominators unbalanced,
    /// the same property that makes the default weights work.
    pub fn primes(r: usize) -> Self {
        assert!(r >= 1);
        let weights = (0..=r as u32)
            .map(|i| {
                let mut candidate = 10u64.pow(i) + 1;
                while !is_prime(candidate) {
                    candidate += 1;
                }
                Rational::from_integer(BigInt::from(candidate))
            })
            .collect();
        WeightVector {
            weights,
            strategy: WeightStrategy::Primes,
        }
    }

    /// Arbitrary weights; rejects zero entries and duplicates.
    pub fn custom(weights: Vec<Rational>) -> Result<Self> {
        validate_weights(&weights)?;
        Ok(WeightVector {
            weights,
            strategy: WeightStrategy::Custom,
        })
    }

    /// The built-in vector for `strategy` at ambient dimension `r`.
    pub fn for_strategy(strategy: WeightStrategy, r: usize) -> Option<Self> {
        match strategy {
            WeightStrategy::Pow10 => Some(Self::pow10(r)),
            WeightStrategy::Primes => Some(Self::primes(r)),
            WeightStrategy::Custom => None,
        }
    }

    /// Ambient projective dimension: one less than the number of weights.
    pub fn r(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn strategy(&self) -> WeightStrategy {
        self.strategy
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..n)
            .take_while(|p| p * p <= n)
            .all(|p| !n.is_multiple_of(p))
}

fn validate_weights(weights: &[Rational]) -> Result<()> {
    if weights.len() < 2 {
        return Err(Error::InvalidWeights(format!(
            "need at least 2 weights, got {}",
            weights.len()
        )));
    }
    for (i, w) in weights.iter().enumerate() {
        if w.is_zero() {
            return Err(Error::InvalidWeights(format!("λ_{i} is zero")));
        }
        for (j, other) in weights.iter().enumerate().skip(i + 1) {
            if w == other {
                return Err(Error::InvalidWeights(format!("λ_{i} = λ_{j} = {w}")));
            }
        }
    }
    Ok(())
}

/// Outcome of scanning every graph of a configuration for vanishing
/// denominators at a weight specialization.
#[derive(Clone, Debug)]
pub struct NondegeneracyReport {
    pub ok: bool,
    /// `(graph, factor)` for the first failure in enumeration order.
    pub first_failure: Option<(String, String)>,
}

/// Weight of the torus action on the tangent line of an edge component at
/// the end lying over the flag's vertex: `(λ_{i(F)} - λ_{j(F)}) / d_e`.
pub fn flag_weight(g: &FixedGraph, f: Flag, w: &WeightVector) -> Rational {
    let (u, v) = g.decorated().edge_endpoints(f.edge);
    assert!(
        f.vertex == u || f.vertex == v,
        "flag does not belong to the graph"
    );
    let other = if f.vertex == u { v } else { u };
    let de = g.decorated().edge_degree(f.edge);
    (w.weight(g.label(f.vertex)) - w.weight(g.label(other)))
        / Rational::from_integer(BigInt::from(de))
}

/// Vertex part of the equivariant Euler class of the normal bundle:
/// the product over vertices of
/// `(Π_{j≠i_v}(λ_{i_v}-λ_j))^(1-val) · (Σ ω_F^{-1})^(3-val) · Π ω_F`.
pub fn vertex_euler(g: &FixedGraph, w: &WeightVector) -> Result<Rational> {
    let shape = g.decorated();
    let mut total = Rational::one();
    for v in 0..shape.vertex_count() {
        let val = shape.valence(v) as i32;
        let lam_v = w.weight(g.label(v));
        let mut sum_inv = Rational::zero();
        let mut prod = Rational::one();
        for &(e, other) in shape.incident_edges(v) {
            let de = Rational::from_integer(BigInt::from(shape.edge_degree(e)));
            let omega = (lam_v - w.weight(g.label(other))) / de;
            sum_inv += omega.recip();
            prod *= omega;
        }
        if (3 - val) < 0 && sum_inv.is_zero() {
            return Err(Error::DegenerateWeights {
                graph: g.catalog_line(),
                factor: format!(
                    "sum of inverse flag weights vanished at a valence-{val} vertex with label {}",
                    g.label(v)
                ),
            });
        }
        let mut pin = Rational::one();
        for (j, lam_j) in w.weights().iter().enumerate() {
            if j != g.label(v) {
                pin *= lam_v - lam_j;
            }
        }
        total *= pow_i(&pin, 1 - val) * pow_i(&sum_inv, 3 - val) * prod;
    }
    Ok(total)
}

/// Edge part of the equivariant Euler class of the normal bundle.
///
/// For each edge with endpoint labels `i, j` and degree `d_e` this is
/// `(-1)^{d_e} (d_e!)^2 (λ_i-λ_j)^{2d_e} / d_e^{2d_e}` times the product of
/// `((aλ_i + bλ_j)/d_e - λ_k)` over `a, b >= 0` with `a + b = d_e` and all
/// labels `k` outside `{i, j}`.
pub fn edge_euler(g: &FixedGraph, w: &WeightVector) -> Result<Rational> {
    let shape = g.decorated();
    let mut total = Rational::one();
    for e in 0..shape.edge_count() {
        let (u, v) = shape.edge_endpoints(e);
        let (i, j) = (g.label(u), g.label(v));
        let de = shape.edge_degree(e);
        total *= edge_euler_factor(i, j, de, w.weights()).map_err(|factor| {
            Error::DegenerateWeights {
                graph: g.catalog_line(),
                factor,
            }
        })?;
    }
    Ok(total)
}

fn edge_euler_factor(
    i: usize,
    j: usize,
    de: u32,
    lam: &[Rational],
) -> std::result::Result<Rational, String> {
    let diff = &lam[i] - &lam[j];
    let de_int = BigInt::from(de);
    let fact: BigInt = (1..=de).map(BigInt::from).product();
    let mut value =
        diff.pow(2 * de as i32) * Rational::new(&fact * &fact, Pow::pow(&de_int, 2 * de));
    if !de.is_multiple_of(2) {
        value = -value;
    }
    for a in 0..=de {
        let b = de - a;
        let point = (Rational::from_integer(BigInt::from(a)) * &lam[i]
            + Rational::from_integer(BigInt::from(b)) * &lam[j])
            / Rational::from_integer(de_int.clone());
        for (k, lam_k) in lam.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let factor = &point - lam_k;
            if factor.is_zero() {
                return Err(format!(
                    "(({a}·λ_{i} + {b}·λ_{j})/{de} - λ_{k}) = 0 in the edge Euler product"
                ));
            }
            value *= factor;
        }
    }
    Ok(value)
}

/// Equivariant top Chern class of the degree-`m` contribution bundle
/// restricted to the graph:
/// `Π_e Π_{a+b=m·d_e} (aλ_i + bλ_j)/d_e  ·  Π_v (m λ_{i_v})^{1-val(v)}`.
///
/// The factor count is `m·d + 1`, the rank of the bundle.
pub fn contribution_chern(g: &FixedGraph, w: &WeightVector, m: u32) -> Rational {
    assert!(m >= 1);
    let shape = g.decorated();
    let mut total = Rational::one();
    for e in 0..shape.edge_count() {
        let (u, v) = shape.edge_endpoints(e);
        total *=
            contribution_edge_factor(g.label(u), g.label(v), shape.edge_degree(e), m, w.weights());
    }
    let m_rat = Rational::from_integer(BigInt::from(m));
    for v in 0..shape.vertex_count() {
        let val = shape.valence(v) as i32;
        total *= pow_i(&(&m_rat * w.weight(g.label(v))), 1 - val);
    }
    total
}

/// [`edge_euler_factor`] with the pure endpoint columns stripped: those
/// contribute `-P_i P_j / (λ_i - λ_j)^2`, which [`Evaluator::summand_raw`]
/// cancels against its per-vertex factors. Only the mixed `0 < a < d_e`
/// terms can vanish, so degeneracy detection is unaffected.
fn cancelled_edge_factor(
    i: usize,
    j: usize,
    de: u32,
    lam: &[Rational],
) -> std::result::Result<Rational, String> {
    let diff = &lam[i] - &lam[j];
    let de_int = BigInt::from(de);
    let fact: BigInt = (1..=de).map(BigInt::from).product();
    let mut value =
        pow_i(&diff, 2 * de as i32 - 2) * Rational::new(&fact * &fact, Pow::pow(&de_int, 2 * de));
    if de.is_multiple_of(2) {
        value = -value;
    }
    for a in 1..de {
        let b = de - a;
        let point = (Rational::from_integer(BigInt::from(a)) * &lam[i]
            + Rational::from_integer(BigInt::from(b)) * &lam[j])
            / Rational::from_integer(de_int.clone());
        for (k, lam_k) in lam.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let factor = &point - lam_k;
            if factor.is_zero() {
                return Err(format!(
                    "(({a}·λ_{i} + {b}·λ_{j})/{de} - λ_{k}) = 0 in the edge Euler product"
                ));
            }
            value *= factor;
        }
    }
    Ok(value)
}

fn contribution_edge_factor(i: usize, j: usize, de: u32, m: u32, lam: &[Rational]) -> Rational {
    let top = m * de;
    let mut num = Rational::one();
    for a in 0..=top {
        let b = top - a;
        num *= Rational::from_integer(BigInt::from(a)) * &lam[i]
            + Rational::from_integer(BigInt::from(b)) * &lam[j];
    }
    num / Rational::from_integer(BigInt::from(de).pow(top + 1))
}

/// `x^e` for possibly negative `e`; `x` must be nonzero when `e < 0`.
/// An exponent-zero factor is simply absent from the product, so
/// `pow_i(0, 0)` is 1.
fn pow_i(x: &Rational, e: i32) -> Rational {
    if e == 0 {
        Rational::one()
    } else {
        x.pow(e)
    }
}

/// Precomputed per-edge and per-label factors for one weight vector and one
/// multiset of contribution-bundle degrees.
///
/// Every factor of the Bott summand that depends only on
/// `(endpoint labels, edge degree)` is cached up front; evaluating a graph
/// is then a handful of table lookups and one reduction. All fields are
/// immutable after construction, so a single evaluator may be shared across
/// worker threads.
pub struct Evaluator {
    lam: Vec<Rational>,
    r: usize,
    d_max: u32,
    /// ω(i, j, d_e) = (λ_i - λ_j)/d_e, ordered pairs.
    omega: Vec<Rational>,
    omega_inv: Vec<Rational>,
    /// V_i = Π_t (m_t λ_i), the contribution vertex base.
    v_tab: Vec<Rational>,
    /// P_i = Π_{j≠i}(λ_i - λ_j).
    p_tab: Vec<Rational>,
    /// Edge Euler factors with the pure endpoint terms cancelled away:
    /// the `(a, b) = (d_e, 0)` and `(0, d_e)` columns of the inner product
    /// contribute `-P_i P_j / (λ_i - λ_j)^2`, which the per-vertex factors
    /// absorb, leaving `(-1)^{d_e+1} (d_e!)^2 (λ_i-λ_j)^{2d_e-2} / d_e^{2d_e}`
    /// times the mixed `0 < a < d_e` terms. For degree-one edges this is 1.
    edge_tab: Vec<std::result::Result<Rational, String>>,
    /// Product over all bundle degrees of the contribution edge factors.
    contrib_tab: Vec<Rational>,
}

impl Evaluator {
    /// Builds the tables for graphs of total degree up to `d_max` against
    /// the contribution bundles of degrees `factor_degrees`.
    pub fn new(w: &WeightVector, d_max: u32, factor_degrees: &[u32]) -> Self {
        assert!(d_max >= 1);
        assert!(factor_degrees.iter().all(|&m| m >= 1));
        let lam = w.weights().to_vec();
        let r = w.r();
        let stride = (r + 1) * (r + 1);
        let mut omega = vec![Rational::zero(); stride * d_max as usize];
        let mut omega_inv = vec![Rational::zero(); stride * d_max as usize];
        let mut edge_tab = vec![Ok(Rational::zero()); stride * d_max as usize];
        let mut contrib_tab = vec![Rational::zero(); stride * d_max as usize];
        for i in 0..=r {
            for j in 0..=r {
                if i == j {
                    continue;
                }
                let diff = &lam[i] - &lam[j];
                for de in 1..=d_max {
                    let idx = (i * (r + 1) + j) * d_max as usize + de as usize - 1;
                    let om = &diff / Rational::from_integer(BigInt::from(de));
                    omega_inv[idx] = om.recip();
                    omega[idx] = om;
                    if i < j {
                        edge_tab[idx] = cancelled_edge_factor(i, j, de, &lam);
                        contrib_tab[idx] = factor_degrees
                            .iter()
                            .map(|&m| contribution_edge_factor(i, j, de, m, &lam))
                            .product();
                    }
                }
            }
        }
        let v_tab = (0..=r)
            .map(|i| {
                let mut v = Rational::one();
                for &m in factor_degrees {
                    v *= Rational::from_integer(BigInt::from(m)) * &lam[i];
                }
                v
            })
            .collect();
        let p_tab = (0..=r)
            .map(|i| {
                let mut p = Rational::one();
                for j in 0..=r {
                    if j != i {
                        p *= &lam[i] - &lam[j];
                    }
                }
                p
            })
            .collect();
        Evaluator {
            lam,
            r,
            d_max,
            omega,
            omega_inv,
            v_tab,
            p_tab,
            edge_tab,
            contrib_tab,
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.lam
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, de: u32) -> usize {
        (i * (self.r + 1) + j) * self.d_max as usize + de as usize - 1
    }

    /// The Bott summand of `g`: contribution classes over `a_Γ` times the
    /// Euler class of the normal bundle. Always reduced.
    pub fn summand(&self, g: &FixedGraph) -> Result<Rational> {
        self.summand_raw(g.decorated(), g.labels())
            .map(|x| x.reduced())
            .map_err(|factor| Error::DegenerateWeights {
                graph: g.catalog_line(),
                factor,
            })
    }

    /// Shape-plus-labels variant of [`Evaluator::summand`] used by the hot
    /// enumeration loop; the error carries only the factor description.
    ///
    /// The returned fraction has a positive denominator but is not reduced:
    /// reducing here costs a large-operand gcd per graph, and the summation
    /// that consumes these values reduces on its first merge anyway.
    pub fn summand_raw(
        &self,
        shape: &DecoratedShape,
        labels: &[u8],
    ) -> std::result::Result<Rational, String> {
        let mut num = BigInt::one();
        let mut den = BigInt::from(shape.a_gamma());
        for e in 0..shape.edge_count() {
            let (u, v) = shape.edge_endpoints(e);
            let de = shape.edge_degree(e);
            let (i, j) = (labels[u] as usize, labels[v] as usize);
            let idx = self.idx(i.min(j), i.max(j), de);
            let ee = self.edge_tab[idx].as_ref().map_err(Clone::clone)?;
            let c = &self.contrib_tab[idx];
            num *= c.numer();
            num *= ee.denom();
            den *= c.denom();
            den *= ee.numer();
        }
        for v in 0..shape.vertex_count() {
            let i = labels[v] as usize;
            let inc = shape.incident_edges(v);
            let vb = &self.v_tab[i];
            let p = &self.p_tab[i];
            // Combined per-vertex factor, after the endpoint columns of the
            // edge table have been cancelled in:
            //   V_i^(1-val) · (Σ ω^{-1})^(val-3) / (P_i · Π ω).
            match inc.len() {
                1 => {
                    let (e, o) = inc[0];
                    let om = &self.omega[self.idx(i, labels[o] as usize, shape.edge_degree(e))];
                    num *= om.numer();
                    num *= p.denom();
                    den *= om.denom();
                    den *= p.numer();
                }
                2 => {
                    let (e0, o0) = inc[0];
                    let (e1, o1) = inc[1];
                    let t = &self.omega[self.idx(i, labels[o0] as usize, shape.edge_degree(e0))]
                        + &self.omega[self.idx(i, labels[o1] as usize, shape.edge_degree(e1))];
                    if t.is_zero() {
                        return Err(degenerate_vertex(2, i));
                    }
                    num *= t.denom();
                    num *= vb.denom();
                    num *= p.denom();
                    den *= t.numer();
                    den *= vb.numer();
                    den *= p.numer();
                }
                3 => {
                    let mut prod = Rational::one();
                    for &(e, o) in inc {
                        prod *= &self.omega[self.idx(i, labels[o] as usize, shape.edge_degree(e))];
                    }
                    num *= vb.denom() * vb.denom();
                    num *= prod.denom();
                    num *= p.denom();
                    den *= vb.numer() * vb.numer();
                    den *= prod.numer();
                    den *= p.numer();
                }
                val => {
                    let mut sum_inv = Rational::zero();
                    let mut prod = Rational::one();
                    for &(e, o) in inc {
                        let idx = self.idx(i, labels[o] as usize, shape.edge_degree(e));
                        sum_inv += &self.omega_inv[idx];
                        prod *= &self.omega[idx];
                    }
                    if sum_inv.is_zero() {
                        return Err(degenerate_vertex(val, i));
                    }
                    let k = val as u32;
                    num *= vb.denom().pow(k - 1);
                    num *= sum_inv.numer().pow(k - 3);
                    num *= prod.denom();
                    num *= p.denom();
                    den *= vb.numer().pow(k - 1);
                    den *= sum_inv.denom().pow(k - 3);
                    den *= prod.numer();
                    den *= p.numer();
                }
            }
        }
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Rational::new_raw(num, den))
    }
}

fn degenerate_vertex(val: usize, label: usize) -> String {
    format!("sum of inverse flag weights vanished at a valence-{val} vertex with label {label}")
}

/// Scans every fixed-point graph for `(r, d)` and verifies that no
/// denominator of any Bott summand vanishes at `weights`. The report names
/// the first failing graph and factor in enumeration order.
pub fn check_nondegenerate(
    r: usize,
    d: u32,
    weights: &[Rational],
    factor_degrees: &[u32],
) -> NondegeneracyReport {
    use rayon::prelude::*;

    if let Err(e) = validate_weights(weights) {
        return NondegeneracyReport {
            ok: false,
            first_failure: Some(("-".into(), e.to_string())),
        };
    }
    let w = WeightVector {
        weights: weights.to_vec(),
        strategy: WeightStrategy::Custom,
    };
    let ev = Evaluator::new(&w, d, factor_degrees);
    let shapes = crate::graphs::decorated_shapes(d);
    let tasks = chunked_tasks(&shapes, r, 4096);
    let failure = tasks
        .par_iter()
        .filter_map(|&(si, ref range)| {
            let shape = &shapes[si];
            let mut index = range.start;
            let mut found: Option<(usize, u64, String)> = None;
            let _ = shape.for_each_labeling_in::<()>(r, range.clone(), |labels| {
                if let Err(factor) = ev.summand_raw(shape, labels) {
                    let g = FixedGraph::new(shape, labels.to_vec(), r).expect("valid labeling");
                    found = Some((si, index, format!("{} :: {factor}", g.catalog_line())));
                    return Err(());
                }
                index += 1;
                Ok(())
            });
            found
        })
        .min_by_key(|&(si, idx, _)| (si, idx));
    match failure {
        None => NondegeneracyReport {
            ok: true,
            first_failure: None,
        },
        Some((_, _, desc)) => {
            let (graph, factor) = desc.split_once(" :: ").expect("description format");
            NondegeneracyReport {
                ok: false,
                first_failure: Some((graph.to_string(), factor.to_string())),
            }
        }
    }
}

/// Splits the labeling space of each shape into index ranges of at most
/// `chunk` labelings, preserving enumeration order.
pub(crate) fn chunked_tasks(
    shapes: &[DecoratedShape],
    r: usize,
    chunk: u64,
) -> Vec<(usize, std::ops::Range<u64>)> {
    let mut tasks = Vec::new();
    for (si, shape) in shapes.iter().enumerate() {
        let total = shape.labeling_count(r);
        let mut start = 0;
        while start < total {
            let end = (start + chunk).min(total);
            tasks.push((si, start..end));
            start = end;
        }
    }
    tasks
}
