//! Builds formal contexts from pre-extracted verb–argument pair files:
//! heads become objects, `verb#role` predicates become attributes, and a
//! cell is set when the head's conditional probability given the
//! predicate exceeds a threshold.

use std::collections::BTreeMap;
use std::path::Path;

use crate::context::FormalContext;
use crate::error::{Error, Result};

/// One aggregated co-occurrence: a head noun observed with a predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub head: String,
    /// `verb#role` with role one of `subj`, `obj`, or `pp_<preposition>`.
    pub predicate: String,
    pub count: u64,
}

/// Aggregated, deterministically ordered pair records.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairCollection {
    records: Vec<PairRecord>,
}

impl PairCollection {
    pub fn records(&self) -> &[PairRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// A pair with its conditional probability P(head | predicate).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPair {
    pub head: String,
    pub predicate: String,
    pub weight: f64,
}

fn valid_role(role: &str) -> bool {
    match role {
        "subj" | "obj" => true,
        other => other.strip_prefix("pp_").is_some_and(|prep| !prep.is_empty()),
    }
}

/// Parses the pair TSV format `head<TAB>verb#role<TAB>count`. Lines
/// starting with `#` and blank lines are skipped; duplicate
/// (head, predicate) lines aggregate by summing counts.
pub fn parse_pairs(text: &str) -> Result<PairCollection> {
    let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let head = fields[0];
        if head.is_empty() {
            return Err(Error::parse(line_no, "empty head"));
        }
        let predicate = fields[1];
        match predicate.split_once('#') {
            Some((verb, role)) if !verb.is_empty() && valid_role(role) => {}
            _ => {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "bad predicate {predicate:?} (expected verb#subj, verb#obj, or verb#pp_<prep>)"
                    ),
                ));
            }
        }
        let count: u64 = match fields[2].parse() {
            Ok(n) if n >= 1 => n,
            _ => return Err(Error::parse(line_no, format!("bad count {:?}", fields[2]))),
        };
        *counts.entry((head.to_string(), predicate.to_string())).or_insert(0) += count;
    }
    let records = counts
        .into_iter()
        .map(|((head, predicate), count)| PairRecord { head, predicate, count })
        .collect();
    Ok(PairCollection { records })
}

/// Reads and parses a pair TSV file.
pub fn load_pairs(path: &Path) -> Result<PairCollection> {
    parse_pairs(&std::fs::read_to_string(path)?)
}

/// Conditional probability of each head given its predicate: the pair
/// count divided by the predicate's total. Weights per predicate sum to 1.
pub fn weigh_pairs(pairs: &PairCollection) -> Result<Vec<WeightedPair>> {
    if pairs.is_empty() {
        return Err(Error::input("cannot weigh an empty pair collection"));
    }
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for r in &pairs.records {
        *totals.entry(&r.predicate).or_insert(0) += r.count;
    }
    Ok(pairs
        .records
        .iter()
        .map(|r| WeightedPair {
            head: r.head.clone(),
            predicate: r.predicate.clone(),
            weight: r.count as f64 / totals[r.predicate.as_str()] as f64,
        })
        .collect())
}

/// Builds a formal context whose cells are the pairs weighing strictly
/// more than the threshold. Heads and predicates left without any
/// surviving cell are dropped; labels are sorted.
pub fn build_context(weighted: &[WeightedPair], threshold: f64) -> Result<FormalContext> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::input(format!("threshold {threshold} outside [0, 1]")));
    }
    let surviving: Vec<&WeightedPair> =
        weighted.iter().filter(|w| w.weight > threshold).collect();
    let mut objects: Vec<String> = surviving.iter().map(|w| w.head.clone()).collect();
    objects.sort();
    objects.dedup();
    let mut attributes: Vec<String> = surviving.iter().map(|w| w.predicate.clone()).collect();
    attributes.sort();
    attributes.dedup();
    let cells: Vec<Vec<bool>> = objects
        .iter()
        .map(|head| {
            attributes
                .iter()
                .map(|pred| {
                    surviving.iter().any(|w| &w.head == head && &w.predicate == pred)
                })
                .collect()
        })
        .collect();
    FormalContext::from_bool_rows(objects, attributes, cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEMO: &str = "# head\tpredicate\tcount\n\
dog\teat#subj\t3\n\
cat\teat#subj\t1\n";

    #[test]
    fn parses_and_aggregates() {
        let pairs = parse_pairs("dog\teat#subj\t3\ndog\teat#subj\t2\n").unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(
            pairs.records()[0],
            PairRecord { head: "dog".into(), predicate: "eat#subj".into(), count: 5 }
        );
        assert!(parse_pairs("").unwrap().is_empty());
        assert!(parse_pairs("# just a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn records_are_sorted() {
        let pairs =
            parse_pairs("zebra\trun#subj\t1\napple\tfall#subj\t1\napple\teat#obj\t2\n").unwrap();
        let keys: Vec<(&str, &str)> =
            pairs.records().iter().map(|r| (r.head.as_str(), r.predicate.as_str())).collect();
        assert_eq!(keys, vec![("apple", "eat#obj"), ("apple", "fall#subj"), ("zebra", "run#subj")]);
    }

    #[test]
    fn malformed_lines_are_rejected_with_line_numbers() {
        for (text, line) in [
            ("dog\teat#drv\t1\n", 1),
            ("ok\teat#subj\t1\ndog\teat\t1\n", 2),
            ("dog\teat#subj\t0\n", 1),
            ("dog\teat#subj\t-3\n", 1),
            ("dog\teat#subj\tmany\n", 1),
            ("dog\teat#subj\n", 1),
            ("\teat#subj\t1\n", 1),
            ("dog\t#subj\t1\n", 1),
            ("dog\teat#pp_\t1\n", 1),
        ] {
            match parse_pairs(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "input {text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        // Prepositional roles are fine.
        assert!(parse_pairs("dog\tsit#pp_on\t2\n").is_ok());
    }

    #[test]
    fn weights_are_conditional_probabilities() {
        let pairs = parse_pairs(DEMO).unwrap();
        let weighted = weigh_pairs(&pairs).unwrap();
        let get = |head: &str| weighted.iter().find(|w| w.head == head).unwrap().weight;
        assert_eq!(get("dog"), 0.75);
        assert_eq!(get("cat"), 0.25);

        let single = weigh_pairs(&parse_pairs("dog\teat#subj\t7\n").unwrap()).unwrap();
        assert_eq!(single[0].weight, 1.0);

        assert!(weigh_pairs(&PairCollection::default()).is_err());
    }

    #[test]
    fn weights_sum_to_one_per_predicate() {
        let text = "a\tf#subj\t1\nb\tf#subj\t2\nc\tf#subj\t3\nx\tg#obj\t5\ny\tg#obj\t5\n";
        let weighted = weigh_pairs(&parse_pairs(text).unwrap()).unwrap();
        let mut sums: BTreeMap<&str, f64> = BTreeMap::new();
        for w in &weighted {
            *sums.entry(w.predicate.as_str()).or_insert(0.0) += w.weight;
        }
        for (pred, sum) in sums {
            assert!((sum - 1.0).abs() < 1e-9, "{pred}: {sum}");
        }
    }

    #[test]
    fn context_thresholding() {
        let weighted = weigh_pairs(&parse_pairs(DEMO).unwrap()).unwrap();
        let ctx = build_context(&weighted, 0.5).unwrap();
        assert_eq!(ctx.objects(), &["dog".to_string()]);
        assert_eq!(ctx.attributes(), &["eat#subj".to_string()]);
        assert!(ctx.incidence(0, 0));

        // Threshold 0 keeps every observed pair as a cell.
        let all = build_context(&weighted, 0.0).unwrap();
        assert_eq!(all.true_cell_count(), 2);

        // Threshold 1 yields the empty context.
        let none = build_context(&weighted, 1.0).unwrap();
        assert_eq!((none.num_objects(), none.num_attributes()), (0, 0));

        assert!(build_context(&weighted, 1.01).is_err());
    }

    #[test]
    fn raising_the_threshold_never_adds_cells() {
        let text = "a\tf#subj\t1\nb\tf#subj\t2\nc\tf#subj\t5\na\tg#obj\t9\nb\tg#obj\t1\n";
        let weighted = weigh_pairs(&parse_pairs(text).unwrap()).unwrap();
        let mut last = usize::MAX;
        for threshold in [0.0, 0.1, 0.2, 0.4, 0.6, 0.9, 1.0] {
            let cells = build_context(&weighted, threshold).unwrap().true_cell_count();
            assert!(cells <= last);
            last = cells;
        }
    }

    #[test]
    fn load_pairs_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.tsv");
        std::fs::write(&path, DEMO).unwrap();
        assert_eq!(load_pairs(&path).unwrap().len(), 2);
        assert!(load_pairs(&dir.path().join("missing.tsv")).is_err());
    }
}
