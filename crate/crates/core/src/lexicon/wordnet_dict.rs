//! Importer for Princeton-style dictionary directories: `data.noun`
//! defines the synsets and their generalization pointers, `index.noun`
//! is cross-checked against them. Only nouns are imported.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexicon::{normalize, Lexicon};

pub(super) fn import(dir: &Path) -> Result<Lexicon> {
    let data = std::fs::read_to_string(dir.join("data.noun"))?;
    let index = std::fs::read_to_string(dir.join("index.noun"))?;
    let (synsets, hypernyms) = parse_data(&data)?;
    validate_index(&index, &synsets)?;
    Lexicon::finish(synsets, hypernyms)
}

/// Turns a lemma as written in a dictionary file (underscores for spaces)
/// into the normalized in-memory form.
fn dict_lemma(word: &str) -> String {
    normalize(&word.replace('_', " "))
}

type SynsetMap = BTreeMap<String, BTreeSet<String>>;

fn parse_data(text: &str) -> Result<(SynsetMap, SynsetMap)> {
    let mut synsets: SynsetMap = BTreeMap::new();
    let mut hypernyms: SynsetMap = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        // License header lines begin with whitespace.
        if line.is_empty() || line.starts_with(char::is_whitespace) {
            continue;
        }
        let body = line.split('|').next().unwrap();
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let fail = |msg: &str| Err(Error::parse(line_no, format!("data.noun: {msg}")));
        if tokens.len() < 4 {
            return fail("truncated synset line");
        }
        let offset = tokens[0];
        if offset.chars().any(|c| !c.is_ascii_digit()) {
            return fail("synset offset is not numeric");
        }
        if tokens[2] != "n" {
            continue;
        }
        let word_count = match usize::from_str_radix(tokens[1 + 2], 16) {
            Ok(n) if n >= 1 => n,
            _ => return fail("bad word count"),
        };
        // Words come as (word, lex_id) token pairs.
        let words_end = 4 + 2 * word_count;
        if tokens.len() < words_end + 1 {
            return fail("truncated word list");
        }
        let id = format!("n{offset}");
        let entry = synsets.entry(id.clone()).or_default();
        for w in 0..word_count {
            entry.insert(dict_lemma(tokens[4 + 2 * w]));
        }
        let pointer_count = match tokens[words_end].parse::<usize>() {
            Ok(n) => n,
            Err(_) => return fail("bad pointer count"),
        };
        if tokens.len() < words_end + 1 + 4 * pointer_count {
            return fail("truncated pointer list");
        }
        for p in 0..pointer_count {
            let base = words_end + 1 + 4 * p;
            let symbol = tokens[base];
            let target = tokens[base + 1];
            let pos = tokens[base + 2];
            // '@' and '@i' point at generalizations; other parts of
            // speech are out of scope.
            if symbol.starts_with('@') && pos == "n" {
                hypernyms.entry(id.clone()).or_default().insert(format!("n{target}"));
            }
        }
    }
    Ok((synsets, hypernyms))
}

fn validate_index(text: &str, synsets: &SynsetMap) -> Result<()> {
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.is_empty() || line.starts_with(char::is_whitespace) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let fail = |msg: String| Err(Error::parse(line_no, format!("index.noun: {msg}")));
        if tokens.len() < 6 {
            return fail("truncated index line".into());
        }
        if tokens[1] != "n" {
            continue;
        }
        let synset_count: usize = match tokens[2].parse() {
            Ok(n) => n,
            Err(_) => return fail("bad synset count".into()),
        };
        let pointer_count: usize = match tokens[3].parse() {
            Ok(n) => n,
            Err(_) => return fail("bad pointer count".into()),
        };
        let offsets_start = 4 + pointer_count + 2;
        if tokens.len() != offsets_start + synset_count {
            return fail("field count does not match declared counts".into());
        }
        for offset in &tokens[offsets_start..] {
            let id = format!("n{offset}");
            if !synsets.contains_key(&id) {
                return fail(format!("references unknown synset {offset}"));
            }
        }
    }
    Ok(())
}
