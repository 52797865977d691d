//! Formal contexts: labelled objects and attributes with a boolean incidence
//! relation, plus the two derivation operators everything else builds on.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A formal context: objects, attributes, and which object has which
/// attribute. Incidence is stored bit-packed row-major; the column-major
/// transpose is materialized on first use so both row and column
/// intersections stay word-wise.
///
/// Contexts are immutable after construction; every reduction produces a new
/// context.
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    cols: OnceLock<Vec<BitSet>>,
    object_idx: OnceLock<HashMap<String, usize>>,
    attribute_idx: OnceLock<HashMap<String, usize>>,
}

impl Clone for FormalContext {
    fn clone(&self) -> Self {
        FormalContext {
            objects: self.objects.clone(),
            attributes: self.attributes.clone(),
            rows: self.rows.clone(),
            cols: OnceLock::new(),
            object_idx: OnceLock::new(),
            attribute_idx: OnceLock::new(),
        }
    }
}

impl PartialEq for FormalContext {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.attributes == other.attributes
            && self.rows == other.rows
    }
}

impl Eq for FormalContext {}

impl std::fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FormalContext")
            .field("objects", &self.objects)
            .field("attributes", &self.attributes)
            .field("rows", &self.rows)
            .finish()
    }
}

fn check_labels(kind: &str, labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for label in labels {
        if label.contains('\n') || label.contains('\r') {
            return Err(Error::input(format!("{kind} label {label:?} contains a line break")));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::input(format!("duplicate {kind} label {label:?}")));
        }
    }
    Ok(())
}

impl FormalContext {
    pub fn new(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Result<Self> {
        check_labels("object", &objects)?;
        check_labels("attribute", &attributes)?;
        if rows.len() != objects.len() {
            return Err(Error::input(format!(
                "{} rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        for (g, row) in rows.iter().enumerate() {
            if row.universe() != attributes.len() {
                return Err(Error::input(format!(
                    "row {g} spans {} attributes, expected {}",
                    row.universe(),
                    attributes.len()
                )));
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            rows,
            cols: OnceLock::new(),
            object_idx: OnceLock::new(),
            attribute_idx: OnceLock::new(),
        })
    }

    /// Convenience constructor from boolean rows, mostly for tests.
    pub fn from_bool_rows(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let m = attributes.len();
        let mut packed = Vec::with_capacity(rows.len());
        for row in &rows {
            if row.len() != m {
                return Err(Error::input(format!("row width {} != {m}", row.len())));
            }
            let mut bits = BitSet::empty(m);
            for (j, &cell) in row.iter().enumerate() {
                if cell {
                    bits.insert(j);
                }
            }
            packed.push(bits);
        }
        FormalContext::new(objects, attributes, packed)
    }

    /// The empty 0x0 context.
    pub fn empty() -> Self {
        FormalContext::new(Vec::new(), Vec::new(), Vec::new()).unwrap()
    }

    /// Seeded random context: each cell is true independently with
    /// probability `density`. The same arguments always produce the same
    /// context, on any platform.
    pub fn random(
        num_objects: usize,
        num_attributes: usize,
        density: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::input(format!("density {density} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::with_capacity(num_objects);
        for _ in 0..num_objects {
            let mut row = BitSet::empty(num_attributes);
            for j in 0..num_attributes {
                if rng.gen::<f64>() < density {
                    row.insert(j);
                }
            }
            rows.push(row);
        }
        let objects = (1..=num_objects).map(|i| format!("g{i}")).collect();
        let attributes = (1..=num_attributes).map(|j| format!("m{j}")).collect();
        FormalContext::new(objects, attributes, rows)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        let map = self.object_idx.get_or_init(|| {
            self.objects.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect()
        });
        map.get(label).copied()
    }

    pub fn attribute_index(&self, label: &str) -> Option<usize> {
        let map = self.attribute_idx.get_or_init(|| {
            self.attributes.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect()
        });
        map.get(label).copied()
    }

    pub fn incidence(&self, object: usize, attribute: usize) -> bool {
        self.rows[object].contains(attribute)
    }

    pub fn row(&self, object: usize) -> &BitSet {
        &self.rows[object]
    }

    pub fn col(&self, attribute: usize) -> &BitSet {
        &self.columns()[attribute]
    }

    fn columns(&self) -> &[BitSet] {
        self.cols.get_or_init(|| {
            let mut cols = vec![BitSet::empty(self.objects.len()); self.attributes.len()];
            for (g, row) in self.rows.iter().enumerate() {
                for m in row.iter() {
                    cols[m].insert(g);
                }
            }
            cols
        })
    }

    pub fn true_cell_count(&self) -> usize {
        self.rows.iter().map(|r| r.count()).sum()
    }

    /// Fraction of true cells; 0 for a degenerate (empty-dimension) context.
    pub fn fill_ratio(&self) -> f64 {
        let cells = self.objects.len() * self.attributes.len();
        if cells == 0 {
            0.0
        } else {
            self.true_cell_count() as f64 / cells as f64
        }
    }

    /// Attributes shared by every object in `objs`. The empty object set
    /// yields all attributes.
    pub fn intent_of(&self, objs: &BitSet) -> BitSet {
        debug_assert_eq!(objs.universe(), self.objects.len());
        let mut intent = BitSet::full(self.attributes.len());
        for g in objs.iter() {
            intent.intersect_with(&self.rows[g]);
        }
        intent
    }

    /// Objects carrying every attribute in `attrs`. The empty attribute set
    /// yields all objects.
    pub fn extent_of(&self, attrs: &BitSet) -> BitSet {
        debug_assert_eq!(attrs.universe(), self.attributes.len());
        let mut extent = BitSet::full(self.objects.len());
        for m in attrs.iter() {
            extent.intersect_with(&self.columns()[m]);
        }
        extent
    }

    /// Double derivation on the attribute side.
    pub fn closure_of(&self, attrs: &BitSet) -> BitSet {
        self.intent_of(&self.extent_of(attrs))
    }

    /// Index-validated wrapper around [`intent_of`](Self::intent_of).
    pub fn object_intent(&self, objs: &[usize]) -> Result<BitSet> {
        Ok(self.intent_of(&self.object_set(objs)?))
    }

    /// Index-validated wrapper around [`extent_of`](Self::extent_of).
    pub fn attribute_extent(&self, attrs: &[usize]) -> Result<BitSet> {
        Ok(self.extent_of(&self.attribute_set(attrs)?))
    }

    /// Index-validated wrapper around [`closure_of`](Self::closure_of).
    pub fn closure(&self, attrs: &[usize]) -> Result<BitSet> {
        Ok(self.closure_of(&self.attribute_set(attrs)?))
    }

    fn object_set(&self, objs: &[usize]) -> Result<BitSet> {
        let mut set = BitSet::empty(self.objects.len());
        for &g in objs {
            if g >= self.objects.len() {
                return Err(Error::input(format!(
                    "object index {g} out of range ({} objects)",
                    self.objects.len()
                )));
            }
            set.insert(g);
        }
        Ok(set)
    }

    fn attribute_set(&self, attrs: &[usize]) -> Result<BitSet> {
        let mut set = BitSet::empty(self.attributes.len());
        for &m in attrs {
            if m >= self.attributes.len() {
                return Err(Error::input(format!(
                    "attribute index {m} out of range ({} attributes)",
                    self.attributes.len()
                )));
            }
            set.insert(m);
        }
        Ok(set)
    }

    /// Fraction of attributes the object has. Errors when the context has no
    /// attributes (the ratio is undefined).
    pub fn row_frequency(&self, object: usize) -> Result<f64> {
        if object >= self.objects.len() {
            return Err(Error::input(format!("object index {object} out of range")));
        }
        if self.attributes.is_empty() {
            return Err(Error::input("row frequency undefined: context has no attributes"));
        }
        Ok(self.rows[object].count() as f64 / self.attributes.len() as f64)
    }

    /// Fraction of objects carrying the attribute. Errors when the context
    /// has no objects.
    pub fn col_frequency(&self, attribute: usize) -> Result<f64> {
        if attribute >= self.attributes.len() {
            return Err(Error::input(format!("attribute index {attribute} out of range")));
        }
        if self.objects.is_empty() {
            return Err(Error::input("column frequency undefined: context has no objects"));
        }
        Ok(self.columns()[attribute].count() as f64 / self.objects.len() as f64)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The 4x4 worked example used throughout the test suite.
    ///
    /// ```text
    ///      A B C D
    ///   W  . X . X
    ///   X  . X X .
    ///   Y  X X . .
    ///   Z  . . . X
    /// ```
    pub fn small_context() -> FormalContext {
        FormalContext::from_bool_rows(
            vec!["W".into(), "X".into(), "Y".into(), "Z".into()],
            vec!["A".into(), "B".into(), "C".into(), "D".into()],
            vec![
                vec![false, true, false, true],
                vec![false, true, true, false],
                vec![true, true, false, false],
                vec![false, false, false, true],
            ],
        )
        .unwrap()
    }

    /// 5x4 context for the frequency-filter examples.
    ///
    /// ```text
    ///      A B C D
    ///   V  . X . .
    ///   W  X X X .
    ///   X  X . X .
    ///   Y  X . X X
    ///   Z  . X X .
    /// ```
    pub fn freq_context() -> FormalContext {
        FormalContext::from_bool_rows(
            vec!["V".into(), "W".into(), "X".into(), "Y".into(), "Z".into()],
            vec!["A".into(), "B".into(), "C".into(), "D".into()],
            vec![
                vec![false, true, false, false],
                vec![true, true, true, false],
                vec![true, false, true, false],
                vec![true, false, true, true],
                vec![false, true, true, false],
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn attrs(ctx: &FormalContext, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| ctx.attributes()[i].clone()).collect()
    }

    fn objs(ctx: &FormalContext, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| ctx.objects()[i].clone()).collect()
    }

    #[test]
    fn worked_example_intents() {
        let ctx = small_context();
        assert_eq!(attrs(&ctx, &ctx.object_intent(&[0]).unwrap()), ["B", "D"]);
        assert_eq!(attrs(&ctx, &ctx.object_intent(&[]).unwrap()), ["A", "B", "C", "D"]);
        assert!(ctx.object_intent(&[0, 1, 2, 3]).unwrap().is_empty());
    }

    #[test]
    fn worked_example_extents() {
        let ctx = small_context();
        assert_eq!(objs(&ctx, &ctx.attribute_extent(&[1]).unwrap()), ["W", "X", "Y"]);
        assert_eq!(objs(&ctx, &ctx.attribute_extent(&[1, 3]).unwrap()), ["W"]);
        assert_eq!(objs(&ctx, &ctx.attribute_extent(&[]).unwrap()), ["W", "X", "Y", "Z"]);
    }

    #[test]
    fn worked_example_closures() {
        let ctx = small_context();
        assert_eq!(attrs(&ctx, &ctx.closure(&[0]).unwrap()), ["A", "B"]);
        assert!(ctx.closure(&[]).unwrap().is_empty());
    }

    #[test]
    fn closure_is_extensive_monotone_idempotent() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(0..7);
            let m = rng.gen_range(0..7);
            let ctx = FormalContext::random(n, m, rng.gen_range(0.0..=1.0), rng.gen()).unwrap();
            let mut a = BitSet::empty(m);
            let mut b = BitSet::empty(m);
            for j in 0..m {
                if rng.gen_bool(0.4) {
                    a.insert(j);
                }
                if rng.gen_bool(0.4) {
                    b.insert(j);
                }
            }
            b.union_with(&a); // ensure a ⊆ b
            let ca = ctx.closure_of(&a);
            let cb = ctx.closure_of(&b);
            assert!(a.is_subset(&ca), "extensive");
            assert!(ca.is_subset(&cb), "monotone");
            assert_eq!(ctx.closure_of(&ca), ca, "idempotent");
        }
    }

    #[test]
    fn galois_connection_exhaustive_on_small_contexts() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..10 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=6);
            let ctx = FormalContext::random(n, m, rng.gen_range(0.0..=1.0), rng.gen()).unwrap();
            for s_bits in 0..(1u32 << n) {
                let s = BitSet::from_indices(
                    n,
                    &(0..n).filter(|&i| (s_bits >> i) & 1 == 1).collect::<Vec<_>>(),
                );
                for t_bits in 0..(1u32 << m) {
                    let t = BitSet::from_indices(
                        m,
                        &(0..m).filter(|&j| (t_bits >> j) & 1 == 1).collect::<Vec<_>>(),
                    );
                    // T ⊆ S' ⟺ S ⊆ T'
                    let lhs = t.is_subset(&ctx.intent_of(&s));
                    let rhs = s.is_subset(&ctx.extent_of(&t));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn frequencies_match_worked_example() {
        let ctx = freq_context();
        assert_eq!(ctx.row_frequency(1).unwrap(), 0.75); // W
        assert_eq!(ctx.col_frequency(3).unwrap(), 0.20); // D
        let empty_row = FormalContext::from_bool_rows(
            vec!["g".into()],
            vec!["m".into()],
            vec![vec![false]],
        )
        .unwrap();
        assert_eq!(empty_row.row_frequency(0).unwrap(), 0.0);
    }

    #[test]
    fn frequency_errors_on_degenerate_dimension() {
        let no_attrs =
            FormalContext::new(vec!["g".into()], Vec::new(), vec![BitSet::empty(0)]).unwrap();
        assert!(no_attrs.row_frequency(0).is_err());
        let no_objs = FormalContext::new(Vec::new(), vec!["m".into()], Vec::new()).unwrap();
        assert!(no_objs.col_frequency(0).is_err());
    }

    #[test]
    fn random_context_is_deterministic() {
        let a = FormalContext::random(100, 1000, 0.10, 42).unwrap();
        let b = FormalContext::random(100, 1000, 0.10, 42).unwrap();
        assert_eq!(a, b);
        let c = FormalContext::random(100, 1000, 0.10, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_context_fill_tracks_density() {
        let ctx = FormalContext::random(100, 1000, 0.10, 42).unwrap();
        let fill = ctx.fill_ratio();
        assert!((fill - 0.10).abs() <= 0.02, "fill {fill}");
        assert_eq!(FormalContext::random(10, 10, 0.0, 1).unwrap().true_cell_count(), 0);
        assert_eq!(FormalContext::random(10, 10, 1.0, 1).unwrap().true_cell_count(), 100);
    }

    #[test]
    fn random_context_rejects_bad_density() {
        assert!(FormalContext::random(2, 2, -0.1, 0).is_err());
        assert!(FormalContext::random(2, 2, 1.5, 0).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = FormalContext::from_bool_rows(
            vec!["a".into(), "a".into()],
            vec!["m".into()],
            vec![vec![true], vec![false]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn out_of_range_indices_rejected() {
        let ctx = small_context();
        assert!(ctx.object_intent(&[4]).is_err());
        assert!(ctx.attribute_extent(&[9]).is_err());
    }
}
