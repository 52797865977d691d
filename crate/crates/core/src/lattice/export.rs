//! Lattice export: Graphviz DOT with full or reduced labelling, and a JSON
//! dump with label arrays plus cover index pairs.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labeling {
    /// Every node shows its complete extent and intent.
    Full,
    /// Every object and attribute appears exactly once, at its introducing
    /// concept: an attribute at the greatest concept carrying it, an object
    /// at the least.
    Reduced,
}

impl std::str::FromStr for Labeling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Labeling::Full),
            "reduced" => Ok(Labeling::Reduced),
            other => Err(Error::input(format!("unknown labeling {other:?}"))),
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

/// Renders the lattice as a DOT digraph, one arc per cover pair, drawn
/// child to parent (rankdir=BT puts the top concept on top).
pub fn export_dot(lattice: &ConceptLattice, ctx: &FormalContext, labeling: Labeling) -> String {
    let mut out = String::from("digraph concept_lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    let labels = node_labels(lattice, ctx, labeling);
    for (i, label) in labels.iter().enumerate() {
        out.push_str(&format!("  c{i} [label=\"{}\"];\n", dot_escape(label)));
    }
    for &(child, parent) in &lattice.covers {
        out.push_str(&format!("  c{child} -> c{parent};\n"));
    }
    out.push_str("}\n");
    out
}

fn join_labels(labels: &[String], set: &BitSet) -> String {
    set.iter().map(|i| labels[i].as_str()).collect::<Vec<_>>().join(", ")
}

fn node_labels(lattice: &ConceptLattice, ctx: &FormalContext, labeling: Labeling) -> Vec<String> {
    match labeling {
        Labeling::Full => lattice
            .concepts
            .iter()
            .map(|c| {
                format!(
                    "{{{}}}\n{{{}}}",
                    join_labels(ctx.objects(), &c.extent),
                    join_labels(ctx.attributes(), &c.intent)
                )
            })
            .collect(),
        Labeling::Reduced => {
            let mut attr_lines = vec![Vec::new(); lattice.concepts.len()];
            let mut obj_lines = vec![Vec::new(); lattice.concepts.len()];
            // Attribute m is introduced at the concept with the largest
            // extent whose intent carries m; dually for objects.
            for m in 0..ctx.num_attributes() {
                let mut best: Option<usize> = None;
                for (i, c) in lattice.concepts.iter().enumerate() {
                    if c.intent.contains(m)
                        && best.is_none_or(|b| {
                            c.extent.count() > lattice.concepts[b].extent.count()
                        })
                    {
                        best = Some(i);
                    }
                }
                if let Some(i) = best {
                    attr_lines[i].push(ctx.attributes()[m].as_str());
                }
            }
            for g in 0..ctx.num_objects() {
                let mut best: Option<usize> = None;
                for (i, c) in lattice.concepts.iter().enumerate() {
                    if c.extent.contains(g)
                        && best.is_none_or(|b| {
                            c.extent.count() < lattice.concepts[b].extent.count()
                        })
                    {
                        best = Some(i);
                    }
                }
                if let Some(i) = best {
                    obj_lines[i].push(ctx.objects()[g].as_str());
                }
            }
            attr_lines
                .iter()
                .zip(&obj_lines)
                .map(|(attrs, objs)| format!("{}\n{}", attrs.join(", "), objs.join(", ")))
                .collect()
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ConceptDump {
    extent: Vec<String>,
    intent: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct LatticeDump {
    concepts: Vec<ConceptDump>,
    covers: Vec<(usize, usize)>,
}

/// JSON dump: `concepts` with extents/intents as label arrays, and `covers`
/// as index pairs into that array.
pub fn export_json(lattice: &ConceptLattice, ctx: &FormalContext) -> String {
    let dump = LatticeDump {
        concepts: lattice
            .concepts
            .iter()
            .map(|c| ConceptDump {
                extent: c.extent.iter().map(|g| ctx.objects()[g].clone()).collect(),
                intent: c.intent.iter().map(|m| ctx.attributes()[m].clone()).collect(),
            })
            .collect(),
        covers: lattice.covers.clone(),
    };
    let mut text = serde_json::to_string_pretty(&dump).expect("lattice dump serializes");
    text.push('\n');
    text
}

/// Reads a JSON lattice dump back as its cover digraph: node count plus
/// cover pairs, which is all the invariants need.
pub fn parse_json_covers(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let dump: LatticeDump =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let n = dump.concepts.len();
    for &(c, p) in &dump.covers {
        if c >= n || p >= n {
            return Err(Error::input(format!("cover pair ({c}, {p}) out of range for {n} concepts")));
        }
    }
    Ok((n, dump.covers))
}
