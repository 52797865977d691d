use rand::prelude::*;

use crate::bitset::BitSet;
use crate::context::fixtures::small_context;
use crate::context::FormalContext;
use crate::error::Error;
use crate::lattice::*;

/// Oracle: every distinct closure over all attribute subsets, paired with
/// its extent. Exponential, for contexts with few attributes only.
pub(crate) fn brute_force_concepts(ctx: &FormalContext) -> Vec<FormalConcept> {
    let m = ctx.num_attributes();
    assert!(m <= 16, "oracle is exponential in attributes");
    let mut intents: Vec<BitSet> = Vec::new();
    for bits in 0..(1u32 << m) {
        let subset = BitSet::from_indices(
            m,
            &(0..m).filter(|&j| (bits >> j) & 1 == 1).collect::<Vec<_>>(),
        );
        let closed = ctx.closure_of(&subset);
        if !intents.contains(&closed) {
            intents.push(closed);
        }
    }
    let mut concepts: Vec<FormalConcept> = intents
        .into_iter()
        .map(|intent| FormalConcept { extent: ctx.extent_of(&intent), intent })
        .collect();
    concepts.sort_by(|a, b| a.intent.lectic_cmp(&b.intent));
    concepts
}

/// Oracle: covers as the transitive reduction of pairwise strict extent
/// inclusion, checked against all possible intermediates.
pub(crate) fn brute_force_covers(concepts: &[FormalConcept]) -> Vec<(usize, usize)> {
    let n = concepts.len();
    let below = |a: usize, b: usize| {
        concepts[a].extent.is_subset(&concepts[b].extent) && a != b
            && concepts[a].extent != concepts[b].extent
    };
    let mut covers = Vec::new();
    for c in 0..n {
        for p in 0..n {
            if below(c, p) && !(0..n).any(|q| below(c, q) && below(q, p)) {
                covers.push((c, p));
            }
        }
    }
    covers.sort_unstable();
    covers
}

fn concept(ctx: &FormalContext, objs: &[&str], attrs: &[&str]) -> FormalConcept {
    let extent = BitSet::from_indices(
        ctx.num_objects(),
        &objs.iter().map(|o| ctx.object_index(o).unwrap()).collect::<Vec<_>>(),
    );
    let intent = BitSet::from_indices(
        ctx.num_attributes(),
        &attrs.iter().map(|a| ctx.attribute_index(a).unwrap()).collect::<Vec<_>>(),
    );
    FormalConcept { extent, intent }
}

#[test]
fn worked_example_has_exactly_seven_concepts() {
    let ctx = small_context();
    let concepts = enumerate_concepts(&ctx).unwrap();
    let expected = vec![
        concept(&ctx, &["W", "X", "Y", "Z"], &[]),
        concept(&ctx, &["W", "Z"], &["D"]),
        concept(&ctx, &["W", "X", "Y"], &["B"]),
        concept(&ctx, &["W"], &["B", "D"]),
        concept(&ctx, &["X"], &["B", "C"]),
        concept(&ctx, &["Y"], &["A", "B"]),
        concept(&ctx, &[], &["A", "B", "C", "D"]),
    ];
    assert_eq!(concepts, expected);
    assert_eq!(concepts, brute_force_concepts(&ctx));
}

#[test]
fn enumeration_is_lectically_increasing() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..30 {
        let ctx = FormalContext::random(
            rng.gen_range(0..8),
            rng.gen_range(0..8),
            rng.gen_range(0.0..=1.0),
            rng.gen(),
        )
        .unwrap();
        let concepts = enumerate_concepts(&ctx).unwrap();
        assert!(!concepts.is_empty());
        for pair in concepts.windows(2) {
            assert_eq!(pair[0].intent.lectic_cmp(&pair[1].intent), std::cmp::Ordering::Less);
        }
    }
}

#[test]
fn addintent_agrees_with_enumeration() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..60 {
        let ctx = FormalContext::random(
            rng.gen_range(0..9),
            rng.gen_range(0..9),
            rng.gen_range(0.0..=1.0),
            rng.gen(),
        )
        .unwrap();
        let enumerated = enumerate_concepts(&ctx).unwrap();
        let lattice = build_lattice_addintent(&ctx).unwrap();
        assert_eq!(lattice.concepts, enumerated);
        assert_eq!(lattice.covers, brute_force_covers(&enumerated));
    }
}

#[test]
fn worked_example_covering_relation() {
    let ctx = small_context();
    let lattice = build_lattice_addintent(&ctx).unwrap();
    assert_eq!(lattice.edge_count(), 9);
    assert_eq!(lattice.covers, brute_force_covers(&lattice.concepts));

    // ({W}, {B,D}) is covered by ({W,Z}, {D}).
    let child = lattice.concepts.iter().position(|c| c.extent.to_vec() == vec![0]).unwrap();
    let parent =
        lattice.concepts.iter().position(|c| c.extent.to_vec() == vec![0, 3]).unwrap();
    assert!(lattice.covers.contains(&(child, parent)));

    // Top first, bottom last, per lectic order.
    assert_eq!(lattice.top, 0);
    assert_eq!(lattice.bottom, lattice.concept_count() - 1);
}

#[test]
fn degenerate_contexts() {
    // 1x1 all-false: two concepts, one edge.
    let ctx = FormalContext::from_bool_rows(
        vec!["g".into()],
        vec!["m".into()],
        vec![vec![false]],
    )
    .unwrap();
    let lattice = build_lattice_addintent(&ctx).unwrap();
    assert_eq!(lattice.concept_count(), 2);
    assert_eq!(lattice.covers, vec![(1, 0)]);
    let inv = invariants(&lattice);
    assert_eq!((inv.concept_count, inv.edge_count, inv.height, inv.width_lo, inv.width_hi),
               (2, 1, 2, 1, 1));

    // All-true: a single concept.
    let ctx = FormalContext::from_bool_rows(
        vec!["g".into(), "h".into()],
        vec!["m".into()],
        vec![vec![true], vec![true]],
    )
    .unwrap();
    let lattice = build_lattice_addintent(&ctx).unwrap();
    assert_eq!(lattice.concept_count(), 1);
    assert_eq!(lattice.top, lattice.bottom);
    let inv = invariants(&lattice);
    assert_eq!((inv.concept_count, inv.edge_count, inv.height, inv.width_lo, inv.width_hi),
               (1, 0, 1, 1, 1));

    // Empty 0x0 context: one concept with empty extent and intent.
    let lattice = build_lattice_addintent(&FormalContext::empty()).unwrap();
    assert_eq!(lattice.concept_count(), 1);
}

#[test]
fn worked_example_invariants() {
    let ctx = small_context();
    let lattice = build_lattice_addintent(&ctx).unwrap();
    let inv = invariants(&lattice);
    assert_eq!(inv.concept_count, 7);
    assert_eq!(inv.edge_count, 9);
    assert_eq!(inv.height, 4);
    assert_eq!(inv.width_lo, 3);
    assert_eq!(inv.width_hi, 3);

    // Exhaustive chain/antichain oracle over the 7-element order.
    let n = lattice.concept_count();
    let le = |a: usize, b: usize| lattice.concepts[a].extent.is_subset(&lattice.concepts[b].extent);
    let mut longest_chain = 0;
    let mut widest_antichain = 0;
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
        let chain = members.iter().all(|&a| members.iter().all(|&b| le(a, b) || le(b, a)));
        let antichain = members
            .iter()
            .all(|&a| members.iter().all(|&b| a == b || (!le(a, b) && !le(b, a))));
        if chain {
            longest_chain = longest_chain.max(members.len());
        }
        if antichain {
            widest_antichain = widest_antichain.max(members.len());
        }
    }
    assert_eq!(inv.height, longest_chain);
    assert_eq!(inv.width_hi, widest_antichain);
}

#[test]
fn invariant_bounds_on_random_lattices() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..40 {
        let ctx = FormalContext::random(
            rng.gen_range(1..9),
            rng.gen_range(1..9),
            rng.gen_range(0.0..=1.0),
            rng.gen(),
        )
        .unwrap();
        let lattice = build_lattice_addintent(&ctx).unwrap();
        let inv = invariants(&lattice);
        assert!(inv.width_lo <= inv.width_hi);
        assert!(inv.width_hi <= inv.concept_count);
        assert!(inv.height <= inv.concept_count);
        if inv.concept_count >= 2 {
            assert!(inv.height >= 2);
        }
        // width_hi == 1 exactly when the lattice is a chain.
        let is_chain = inv.edge_count == inv.concept_count.saturating_sub(1)
            && inv.height == inv.concept_count;
        assert_eq!(inv.width_hi == 1, is_chain);
    }
}

#[test]
fn concept_count_monotone_under_deletion() {
    let mut rng = StdRng::seed_from_u64(29);
    for _ in 0..30 {
        let n = rng.gen_range(2..8);
        let m = rng.gen_range(2..8);
        let ctx = FormalContext::random(n, m, rng.gen_range(0.0..=1.0), rng.gen()).unwrap();
        let full_count = enumerate_concepts(&ctx).unwrap().len();

        // Drop one random object.
        let drop_g = rng.gen_range(0..n);
        let objects: Vec<String> =
            (0..n).filter(|&g| g != drop_g).map(|g| ctx.objects()[g].clone()).collect();
        let rows: Vec<BitSet> =
            (0..n).filter(|&g| g != drop_g).map(|g| ctx.row(g).clone()).collect();
        let smaller =
            FormalContext::new(objects, ctx.attributes().to_vec(), rows).unwrap();
        assert!(enumerate_concepts(&smaller).unwrap().len() <= full_count);

        // Drop one random attribute.
        let drop_m = rng.gen_range(0..m);
        let attributes: Vec<String> =
            (0..m).filter(|&j| j != drop_m).map(|j| ctx.attributes()[j].clone()).collect();
        let rows: Vec<Vec<bool>> = (0..n)
            .map(|g| (0..m).filter(|&j| j != drop_m).map(|j| ctx.incidence(g, j)).collect())
            .collect();
        let narrower =
            FormalContext::from_bool_rows(ctx.objects().to_vec(), attributes, rows).unwrap();
        assert!(enumerate_concepts(&narrower).unwrap().len() <= full_count);
    }
}

#[test]
fn concept_cap_aborts_with_capacity_error() {
    let ctx = small_context();
    match enumerate_concepts_capped(&ctx, 3) {
        Err(Error::Capacity { reached, cap }) => {
            assert_eq!(cap, 3);
            assert_eq!(reached, 3);
        }
        other => panic!("expected capacity error, got {other:?}"),
    }
    assert!(matches!(
        build_lattice_addintent_capped(&ctx, 3),
        Err(Error::Capacity { .. })
    ));
    // A cap equal to the concept count succeeds.
    assert_eq!(enumerate_concepts_capped(&ctx, 7).unwrap().len(), 7);
}

#[test]
fn covering_relation_rejects_duplicates() {
    let ctx = small_context();
    let mut concepts = enumerate_concepts(&ctx).unwrap();
    concepts.push(concepts[0].clone());
    assert!(covering_relation(&concepts).is_err());
}

#[test]
fn dot_export_full_labels() {
    let ctx = small_context();
    let lattice = build_lattice_addintent(&ctx).unwrap();
    let dot = export_dot(&lattice, &ctx, Labeling::Full);
    assert_eq!(dot.matches("label=").count(), 7);
    assert_eq!(dot.matches(" -> ").count(), 9);
    assert!(dot.contains("{W, Z}\\n{D}"));
}

#[test]
fn dot_export_reduced_labels_place_each_label_once() {
    let ctx = small_context();
    let lattice = build_lattice_addintent(&ctx).unwrap();
    let dot = export_dot(&lattice, &ctx, Labeling::Reduced);
    // Attribute D introduces at ({W,Z}, {D}); that node is c1 in lectic order.
    assert!(dot.contains("c1 [label=\"D\\nZ\"]"), "{dot}");
    for label in ["A", "B", "C", "D"] {
        let hits = dot
            .lines()
            .filter(|l| l.contains("label=") && dot_line_has(l, label))
            .count();
        assert_eq!(hits, 1, "attribute {label} should label exactly one node");
    }
}

fn dot_line_has(line: &str, label: &str) -> bool {
    let body = line.split('"').nth(1).unwrap_or("");
    body.split("\\n")
        .flat_map(|part| part.split(", "))
        .any(|item| item == label)
}

#[test]
fn json_dump_round_trips_covers() {
    let ctx = small_context();
    let lattice = build_lattice_addintent(&ctx).unwrap();
    let json = export_json(&lattice, &ctx);
    let (n, covers) = parse_json_covers(&json).unwrap();
    assert_eq!(n, 7);
    assert_eq!(covers, lattice.covers);
    let inv = invariants_from_covers(n, &covers);
    assert_eq!(inv, invariants(&lattice));
}
