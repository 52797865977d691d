//! Lexical knowledge base: synonym sets plus a depth-bounded
//! generalization (hypernym) hierarchy, queried by lemma.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

mod wordnet_dict;

/// How two lemmas relate through the lexicon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    None,
    /// The second lemma is a generalization of the first.
    SecondGeneralizesFirst,
    /// The first lemma is a generalization of the second.
    FirstGeneralizesSecond,
    Synonym,
}

/// On-disk encodings accepted by [`load_lexicon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexiconFormat {
    Tsv,
    WordnetDict,
}

impl FromStr for LexiconFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(LexiconFormat::Tsv),
            "wordnet-dict" => Ok(LexiconFormat::WordnetDict),
            other => Err(Error::input(format!("unknown lexicon format {other:?}"))),
        }
    }
}

/// Immutable synonym/generalization database. Lemmas are case-folded and
/// whitespace-normalized on entry and on every query; the generalization
/// graph over synsets is validated to be acyclic at load time.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    /// Synset id → member lemmas (normalized).
    synsets: BTreeMap<String, BTreeSet<String>>,
    /// Synset id → ids of its direct generalizations.
    hypernyms: BTreeMap<String, BTreeSet<String>>,
    /// Normalized lemma → ids of every synset containing it.
    lemma_index: HashMap<String, BTreeSet<String>>,
}

/// Case-folds and collapses internal whitespace.
pub fn normalize(lemma: &str) -> String {
    lemma
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

impl Lexicon {
    /// Validates synset references, builds the lemma index, and rejects
    /// cyclic generalization graphs.
    fn finish(
        synsets: BTreeMap<String, BTreeSet<String>>,
        hypernyms: BTreeMap<String, BTreeSet<String>>,
    ) -> Result<Lexicon> {
        for (child, parents) in &hypernyms {
            if !synsets.contains_key(child) {
                return Err(Error::input(format!("unknown synset {child:?} in hierarchy")));
            }
            for parent in parents {
                if !synsets.contains_key(parent) {
                    return Err(Error::input(format!("unknown synset {parent:?} in hierarchy")));
                }
            }
        }
        if let Some(cycle) = find_cycle(&hypernyms) {
            return Err(Error::input(format!("hypernym cycle: {}", cycle.join(" -> "))));
        }
        let mut lemma_index: HashMap<String, BTreeSet<String>> = HashMap::new();
        for (id, lemmas) in &synsets {
            for lemma in lemmas {
                lemma_index.entry(lemma.clone()).or_default().insert(id.clone());
            }
        }
        Ok(Lexicon { synsets, hypernyms, lemma_index })
    }

    /// Parses the TSV lexicon format: `S<TAB>id<TAB>lemma1|lemma2|...`
    /// declares a synset, `H<TAB>child<TAB>parent` a generalization edge.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn from_tsv_str(text: &str) -> Result<Lexicon> {
        let mut synsets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut edges: Vec<(String, String)> = Vec::new();
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
            match fields[0] {
                "S" => {
                    let id = fields[1];
                    if id.is_empty() {
                        return Err(Error::parse(line_no, "empty synset id"));
                    }
                    let entry = synsets.entry(id.to_string()).or_default();
                    for lemma in fields[2].split('|') {
                        let lemma = normalize(lemma);
                        if lemma.is_empty() {
                            return Err(Error::parse(line_no, "empty lemma"));
                        }
                        entry.insert(lemma);
                    }
                }
                "H" => {
                    if fields[1].is_empty() || fields[2].is_empty() {
                        return Err(Error::parse(line_no, "empty synset id"));
                    }
                    edges.push((fields[1].to_string(), fields[2].to_string()));
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        format!("unknown record kind {other:?} (expected S or H)"),
                    ));
                }
            }
        }
        let mut hypernyms: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (child, parent) in edges {
            hypernyms.entry(child).or_default().insert(parent);
        }
        Lexicon::finish(synsets, hypernyms)
    }

    /// Loads a lexicon from a TSV file or a dictionary directory holding
    /// Princeton-format `data.noun` and `index.noun`.
    pub fn load(path: &Path, format: LexiconFormat) -> Result<Lexicon> {
        match format {
            LexiconFormat::Tsv => Lexicon::from_tsv_str(&std::fs::read_to_string(path)?),
            LexiconFormat::WordnetDict => wordnet_dict::import(path),
        }
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn hypernym_edge_count(&self) -> usize {
        self.hypernyms.values().map(|p| p.len()).sum()
    }

    /// True when the lemmas are equal after normalization or share a synset.
    pub fn are_synonyms(&self, a: &str, b: &str) -> bool {
        let a = normalize(a);
        let b = normalize(b);
        if a == b {
            return true;
        }
        match (self.lemma_index.get(&a), self.lemma_index.get(&b)) {
            (Some(sa), Some(sb)) => sa.intersection(sb).next().is_some(),
            _ => false,
        }
    }

    /// Whether some synset of `to` is reachable from some synset of `from`
    /// by at most `depth` generalization edges.
    pub(crate) fn reachable_up(&self, from: &str, to: &str, depth: u32) -> bool {
        let (Some(starts), Some(targets)) =
            (self.lemma_index.get(&normalize(from)), self.lemma_index.get(&normalize(to)))
        else {
            return false;
        };
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut queue: VecDeque<(&str, u32)> = VecDeque::new();
        for id in starts {
            seen.insert(id);
            queue.push_back((id, 0));
        }
        while let Some((id, dist)) = queue.pop_front() {
            if targets.contains(id) {
                return true;
            }
            if dist == depth {
                continue;
            }
            if let Some(parents) = self.hypernyms.get(id) {
                for parent in parents {
                    if seen.insert(parent) {
                        queue.push_back((parent.as_str(), dist + 1));
                    }
                }
            }
        }
        false
    }

    /// Classifies the pair: synonymy wins; otherwise `b` generalizes `a`
    /// when reachable upward within `hyper_depth` edges, and `a`
    /// generalizes `b` within `hypo_depth` edges the other way around.
    pub fn hypernym_related(&self, a: &str, b: &str, hyper_depth: u32, hypo_depth: u32) -> Relation {
        if self.are_synonyms(a, b) {
            return Relation::Synonym;
        }
        // Synonyms were excluded, so 0-edge reachability cannot fire here.
        if self.reachable_up(a, b, hyper_depth) {
            return Relation::SecondGeneralizesFirst;
        }
        if self.reachable_up(b, a, hypo_depth) {
            return Relation::FirstGeneralizesSecond;
        }
        Relation::None
    }
}

/// The label representing a related pair: the more general lemma when one
/// generalizes the other, or the `/`-joined deduplicated components in
/// lexicographic order for synonyms. Composite labels (already containing
/// `/`) contribute their components to a synonym join.
pub fn most_generic(a: &str, b: &str, relation: Relation) -> Result<String> {
    match relation {
        Relation::None => Err(Error::input(format!("no relation between {a:?} and {b:?}"))),
        Relation::SecondGeneralizesFirst => Ok(b.to_string()),
        Relation::FirstGeneralizesSecond => Ok(a.to_string()),
        Relation::Synonym => {
            let parts: BTreeSet<&str> = a.split('/').chain(b.split('/')).collect();
            Ok(parts.into_iter().collect::<Vec<_>>().join("/"))
        }
    }
}

/// Returns one cycle (as a closed id path) if the parent graph has any.
fn find_cycle(hypernyms: &BTreeMap<String, BTreeSet<String>>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color: BTreeMap<&str, Color> = BTreeMap::new();
    fn visit<'a>(
        node: &'a str,
        hypernyms: &'a BTreeMap<String, BTreeSet<String>>,
        color: &mut BTreeMap<&'a str, Color>,
        path: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        color.insert(node, Color::Gray);
        path.push(node);
        if let Some(parents) = hypernyms.get(node) {
            for parent in parents {
                match color.get(parent.as_str()).copied().unwrap_or(Color::White) {
                    Color::Gray => {
                        let start = path.iter().position(|&p| p == parent).unwrap();
                        let mut cycle: Vec<String> =
                            path[start..].iter().map(|s| s.to_string()).collect();
                        cycle.push(parent.clone());
                        return Some(cycle);
                    }
                    Color::White => {
                        if let Some(cycle) = visit(parent, hypernyms, color, path) {
                            return Some(cycle);
                        }
                    }
                    Color::Black => {}
                }
            }
        }
        path.pop();
        color.insert(node, Color::Black);
        None
    }
    let mut path = Vec::new();
    for node in hypernyms.keys() {
        if color.get(node.as_str()).copied().unwrap_or(Color::White) == Color::White {
            if let Some(cycle) = visit(node, hypernyms, &mut color, &mut path) {
                return Some(cycle);
            }
        }
    }
    None
}


#[cfg(test)]
mod tests {
    use rand::prelude::*;

    use super::fixtures::{toy, TOY_TSV};
    use super::*;

    #[test]
    fn toy_fixture_shape() {
        let lex = toy();
        assert_eq!(lex.synset_count(), 3);
        assert_eq!(lex.hypernym_edge_count(), 1);
    }

    #[test]
    fn synonym_queries() {
        let lex = toy();
        assert!(lex.are_synonyms("car", "automobile"));
        assert!(lex.are_synonyms("dog", "dog"));
        assert!(!lex.are_synonyms("dog", "car"));
        // Unknown lemmas are synonyms only of themselves.
        assert!(lex.are_synonyms("zebra", "zebra"));
        assert!(!lex.are_synonyms("zebra", "dog"));
        // Normalization: case and whitespace do not matter.
        assert!(lex.are_synonyms("Car", "  AUTOMOBILE "));
        assert!(Lexicon::default().are_synonyms("Ice  Cream", "ice cream"));
    }

    #[test]
    fn generalization_queries() {
        let lex = toy();
        assert_eq!(lex.hypernym_related("dog", "animal", 4, 4), Relation::SecondGeneralizesFirst);
        assert_eq!(lex.hypernym_related("animal", "dog", 4, 4), Relation::FirstGeneralizesSecond);
        assert_eq!(lex.hypernym_related("dog", "animal", 0, 0), Relation::None);
        assert_eq!(lex.hypernym_related("car", "automobile", 4, 4), Relation::Synonym);
        assert_eq!(lex.hypernym_related("dog", "car", 4, 4), Relation::None);
    }

    #[test]
    fn most_generic_labels() {
        assert_eq!(most_generic("dog", "animal", Relation::SecondGeneralizesFirst).unwrap(), "animal");
        assert_eq!(most_generic("animal", "dog", Relation::FirstGeneralizesSecond).unwrap(), "animal");
        assert_eq!(most_generic("car", "automobile", Relation::Synonym).unwrap(), "automobile/car");
        assert_eq!(most_generic("x", "x", Relation::Synonym).unwrap(), "x");
        // Composite labels contribute components, deduplicated and sorted.
        assert_eq!(most_generic("b/c", "a/c", Relation::Synonym).unwrap(), "a/b/c");
        assert!(most_generic("a", "b", Relation::None).is_err());
    }

    #[test]
    fn empty_and_malformed_inputs() {
        assert_eq!(Lexicon::from_tsv_str("").unwrap().synset_count(), 0);
        assert_eq!(Lexicon::from_tsv_str("# only a comment\n").unwrap().synset_count(), 0);

        let err = Lexicon::from_tsv_str("S\ts1\tdog\nH\ts1\ts9\n").unwrap_err();
        assert!(err.to_string().contains("unknown synset"), "{err}");

        assert!(Lexicon::from_tsv_str("S\ts1\n").is_err());
        assert!(Lexicon::from_tsv_str("Q\ts1\tdog\n").is_err());
        assert!(Lexicon::from_tsv_str("S\ts1\tdog|\n").is_err());
        match Lexicon::from_tsv_str("S\ts1\tdog\nS\ts2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_synset_records_merge() {
        let lex = Lexicon::from_tsv_str("S\ts1\tdog\nS\ts1\thound\n").unwrap();
        assert_eq!(lex.synset_count(), 1);
        assert!(lex.are_synonyms("dog", "hound"));
    }

    #[test]
    fn cycles_are_rejected() {
        let two = "S\ta\tx\nS\tb\ty\nH\ta\tb\nH\tb\ta\n";
        let err = Lexicon::from_tsv_str(two).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");

        let self_loop = "S\ta\tx\nH\ta\ta\n";
        let err = Lexicon::from_tsv_str(self_loop).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");

        // A diamond (two paths to the same ancestor) is not a cycle.
        let diamond = "S\ta\tw\nS\tb\tx\nS\tc\ty\nS\td\tz\nH\ta\tb\nH\ta\tc\nH\tb\td\nH\tc\td\n";
        assert!(Lexicon::from_tsv_str(diamond).is_ok());
    }

    #[test]
    fn synonymy_is_reflexive_and_symmetric() {
        let lex = toy();
        let pool = ["car", "automobile", "dog", "animal", "zebra", "ice cream"];
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let a = pool[rng.gen_range(0..pool.len())];
            let b = pool[rng.gen_range(0..pool.len())];
            assert!(lex.are_synonyms(a, a));
            assert_eq!(lex.are_synonyms(a, b), lex.are_synonyms(b, a));
        }
    }

    /// Chain of six synsets: l0 → l1 → ... → l5, one lemma each.
    fn chain() -> Lexicon {
        let mut tsv = String::new();
        for i in 0..6 {
            tsv.push_str(&format!("S\tc{i}\tl{i}\n"));
        }
        for i in 0..5 {
            tsv.push_str(&format!("H\tc{i}\tc{}\n", i + 1));
        }
        Lexicon::from_tsv_str(&tsv).unwrap()
    }

    #[test]
    fn depth_bounds_are_exact_and_monotone() {
        let lex = chain();
        // l5 is five edges above l0.
        assert_eq!(lex.hypernym_related("l0", "l5", 4, 0), Relation::None);
        assert_eq!(lex.hypernym_related("l0", "l5", 5, 0), Relation::SecondGeneralizesFirst);
        assert_eq!(lex.hypernym_related("l5", "l0", 0, 5), Relation::FirstGeneralizesSecond);
        assert_eq!(lex.hypernym_related("l5", "l0", 0, 4), Relation::None);
        for d in 0..9 {
            let rel = lex.hypernym_related("l0", "l3", d, d);
            if d >= 3 {
                assert_eq!(rel, Relation::SecondGeneralizesFirst);
            } else {
                assert_eq!(rel, Relation::None);
            }
        }
    }

    /// Reachability must agree with boolean matrix powers of the
    /// generalization adjacency, truncated at the queried depth.
    #[test]
    fn reachability_matches_matrix_oracle() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..20 {
            let n = rng.gen_range(2..10usize);
            let mut tsv = String::new();
            for i in 0..n {
                tsv.push_str(&format!("S\ts{i}\tl{i}\n"));
            }
            let mut adj = vec![vec![false; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(0.3) {
                        tsv.push_str(&format!("H\ts{i}\ts{j}\n"));
                        adj[i][j] = true;
                    }
                }
            }
            let lex = Lexicon::from_tsv_str(&tsv).unwrap();
            // reach[d][i][j]: j reachable from i in ≤ d steps.
            let mut reach = vec![vec![false; n]; n];
            for (i, row) in reach.iter_mut().enumerate() {
                row[i] = true;
            }
            for depth in 0..6u32 {
                for i in 0..n {
                    for j in 0..n {
                        let lemma_i = format!("l{i}");
                        let lemma_j = format!("l{j}");
                        assert_eq!(
                            lex.reachable_up(&lemma_i, &lemma_j, depth),
                            reach[i][j],
                            "i={i} j={j} depth={depth}"
                        );
                    }
                }
                // One more multiplication step: reach ← reach ∪ reach·adj.
                let prev = reach.clone();
                for i in 0..n {
                    for k in 0..n {
                        if prev[i][k] {
                            for j in 0..n {
                                if adj[k][j] {
                                    reach[i][j] = true;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tsv_format_selector() {
        assert_eq!("tsv".parse::<LexiconFormat>().unwrap(), LexiconFormat::Tsv);
        assert_eq!(
            "wordnet-dict".parse::<LexiconFormat>().unwrap(),
            LexiconFormat::WordnetDict
        );
        assert!("ttl".parse::<LexiconFormat>().is_err());
    }

    #[test]
    fn load_tsv_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lex.tsv");
        std::fs::write(&path, TOY_TSV).unwrap();
        let lex = Lexicon::load(&path, LexiconFormat::Tsv).unwrap();
        assert_eq!(lex.synset_count(), 3);
    }
}
