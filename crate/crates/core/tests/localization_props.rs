//! Structural properties of the localization formulas that hold without
//! reference to any published value.

use bott_core::localization::Evaluator;
use bott_core::{
    check_nondegenerate, contribution_chern, cy_types, decorated_shapes, edge_euler,
    enumerate_labelings, vertex_euler, FixedGraph, Rational, WeightVector,
};
use num_bigint::BigInt;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn scaled_pow10(r: usize, factor: i64) -> WeightVector {
    let w = WeightVector::pow10(r);
    WeightVector::custom(
        w.weights()
            .iter()
            .map(|x| x * Rational::from_integer(BigInt::from(factor)))
            .collect(),
    )
    .unwrap()
}

/// Every Bott summand is homogeneous of degree zero in the weights:
/// scaling all of them by 3 changes nothing, graph by graph.
#[test]
fn summands_invariant_under_weight_scaling() {
    for ty in cy_types() {
        let r = ty.ambient_dim();
        let w = WeightVector::pow10(r);
        let w3 = scaled_pow10(r, 3);
        for d in 1..=3u32 {
            let ev = Evaluator::new(&w, d, ty.degrees());
            let ev3 = Evaluator::new(&w3, d, ty.degrees());
            for shape in decorated_shapes(d) {
                for g in enumerate_labelings(&shape, r) {
                    assert_eq!(
                        ev.summand(&g).unwrap(),
                        ev3.summand(&g).unwrap(),
                        "scaling changed a summand for type {ty} at d={d}"
                    );
                }
            }
        }
    }
}

/// Permuting the weights by σ while relabeling every vertex by σ leaves
/// each summand unchanged.
#[test]
fn summands_equivariant_under_label_permutation() {
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);
    let mut checked = 0;
    while checked < 100 {
        let r = rng.random_range(2..=7usize);
        let d = rng.random_range(1..=4u32);
        let degrees = vec![rng.random_range(1..=3u32)];
        let shapes = decorated_shapes(d);
        let shape = &shapes[rng.random_range(0..shapes.len())];
        let index = rng.random_range(0..shape.labeling_count(r));
        let labels = shape.labeling_at(r, index);

        let mut perm: Vec<usize> = (0..=r).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let w = WeightVector::pow10(r);
        let mut permuted = vec![Rational::one(); r + 1];
        for (i, lam) in w.weights().iter().enumerate() {
            permuted[perm[i]] = lam.clone();
        }
        let w_perm = WeightVector::custom(permuted).unwrap();
        let relabeled: Vec<u8> = labels.iter().map(|&l| perm[l as usize] as u8).collect();

        let g = FixedGraph::new(shape, labels, r).unwrap();
        let g_perm = FixedGraph::new(shape, relabeled, r).unwrap();
        let ev = Evaluator::new(&w, d, &degrees);
        let ev_perm = Evaluator::new(&w_perm, d, &degrees);
        assert_eq!(ev.summand(&g).unwrap(), ev_perm.summand(&g_perm).unwrap());
        checked += 1;
    }
}

/// For degree-one graphs the normal bundle Euler class collapses to
/// `Π_{k≠i,j}(λ_i-λ_k)(λ_j-λ_k)`, for every label pair and both built-in
/// strategies.
#[test]
fn degree_one_euler_closed_form_all_dimensions() {
    let shapes = decorated_shapes(1);
    let edge = &shapes[0];
    for r in 2..=7usize {
        for w in [WeightVector::pow10(r), WeightVector::primes(r)] {
            for g in enumerate_labelings(edge, r) {
                let (i, j) = (g.label(0), g.label(1));
                let mut expect = Rational::one();
                for k in 0..=r {
                    if k != i && k != j {
                        expect *= w.weight(i) - w.weight(k);
                        expect *= w.weight(j) - w.weight(k);
                    }
                }
                let actual = vertex_euler(&g, &w).unwrap() * edge_euler(&g, &w).unwrap();
                assert_eq!(actual, expect);
            }
        }
    }
}

/// The contribution class of degree `m` has exactly `m·d + 1` scalar
/// factors once vertex exponents are counted with sign: the rank of the
/// bundle. This is a statement about shapes alone.
#[test]
fn contribution_factor_count_is_bundle_rank() {
    for d in 1..=6u32 {
        for shape in decorated_shapes(d) {
            for m in [1u32, 2, 3, 5] {
                let edge_factors: i64 = (0..shape.edge_count())
                    .map(|e| m as i64 * shape.edge_degree(e) as i64 + 1)
                    .sum();
                let vertex_factors: i64 = (0..shape.vertex_count())
                    .map(|v| 1 - shape.valence(v) as i64)
                    .sum();
                assert_eq!(edge_factors + vertex_factors, (m * d) as i64 + 1);
            }
        }
    }
}

/// The contribution bundle of a complete intersection splits into the
/// per-hypersurface bundles: the product of the per-degree classes equals
/// a single pass over the concatenated factor list.
#[test]
fn contribution_splits_over_hypersurface_degrees() {
    for ty in cy_types() {
        if ty.codimension() < 2 {
            continue;
        }
        let r = ty.ambient_dim();
        let w = WeightVector::pow10(r);
        for d in 1..=2u32 {
            for shape in decorated_shapes(d) {
                for g in enumerate_labelings(&shape, r) {
                    let per_factor: Rational = ty
                        .degrees()
                        .iter()
                        .map(|&m| contribution_chern(&g, &w, m))
                        .product();
                    assert_eq!(joint_contribution(&g, &w, ty.degrees()), per_factor);
                }
            }
        }
    }
}

/// Test-local single pass over the direct sum's factors.
fn joint_contribution(g: &FixedGraph, w: &WeightVector, degrees: &[u32]) -> Rational {
    let shape = g.decorated();
    let mut total = Rational::one();
    for &m in degrees {
        for e in 0..shape.edge_count() {
            let (u, v) = shape.edge_endpoints(e);
            let de = shape.edge_degree(e);
            let top = m * de;
            for a in 0..=top {
                let b = top - a;
                total *= (Rational::from_integer(BigInt::from(a)) * w.weight(g.label(u))
                    + Rational::from_integer(BigInt::from(b)) * w.weight(g.label(v)))
                    / Rational::from_integer(BigInt::from(de));
            }
        }
        for v in 0..shape.vertex_count() {
            let base = Rational::from_integer(BigInt::from(m)) * w.weight(g.label(v));
            for _ in 1..shape.valence(v) {
                total /= &base;
            }
        }
    }
    total
}

/// The configuration the tables are computed with is nondegenerate, all
/// the way up to the full degree-six quintic scan.
#[test]
fn pow10_is_nondegenerate_for_the_quintic_scan() {
    let w = WeightVector::pow10(4);
    let quick = check_nondegenerate(4, 1, w.weights(), &[5]);
    assert!(quick.ok);
    let full = check_nondegenerate(4, 6, w.weights(), &[5]);
    assert!(full.ok, "failure: {:?}", full.first_failure);
}

/// Both built-in strategies pass the nondegeneracy scan for every catalog
/// type at the degrees the property suite exercises.
#[test]
fn builtin_strategies_nondegenerate_at_low_degree() {
    for ty in cy_types() {
        let r = ty.ambient_dim();
        for w in [WeightVector::pow10(r), WeightVector::primes(r)] {
            for d in 1..=3u32 {
                let report = check_nondegenerate(r, d, w.weights(), ty.degrees());
                assert!(
                    report.ok,
                    "type {ty} d={d} {:?}: {:?}",
                    w.strategy(),
                    report.first_failure
                );
            }
        }
    }
}
