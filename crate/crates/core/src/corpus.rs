//! The bundled desk-scale corpus with the facts the obstruction rules need
//! as caller-supplied flags.

use crate::diagram::{parse_pd, Diagram};

/// Text of the bundled corpus file.
pub const CORPUS_PD: &str = include_str!("../data/corpus.pd");

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub diagram: Diagram,
    pub prime: bool,
    /// A `(2,n)` torus link with `n ≥ 2` (either handedness).
    pub torus_2n: bool,
    /// A connected sum of two or more Hopf links.
    pub hopf_sum: bool,
}

/// Split a `name: PD` line into optional name and PD text. `#` begins a
/// comment at the start of a line or after whitespace, so names such as
/// `hopf#hopf` survive. Blank and comment-only lines give `None`.
pub fn parse_named_line(line: &str) -> Option<(Option<&str>, &str)> {
    let cut = line
        .char_indices()
        .find(|&(i, c)| c == '#' && (i == 0 || line[..i].ends_with(char::is_whitespace)))
        .map_or(line.len(), |(i, _)| i);
    let body = line[..cut].trim();
    if body.is_empty() {
        return None;
    }
    match body.split_once(':') {
        Some((name, pd)) => Some((Some(name.trim()), pd.trim())),
        None => Some((None, body)),
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    CORPUS_PD
        .lines()
        .filter_map(parse_named_line)
        .map(|(name, pd)| {
            let name = name.expect("corpus lines are named").to_string();
            let diagram = parse_pd(pd).unwrap_or_else(|e| panic!("corpus entry {name}: {e}"));
            let torus_2n = matches!(name.as_str(), "hopf" | "trefoil") || name.starts_with("T2_");
            let hopf_sum = name == "hopf#hopf";
            let prime = !name.contains('#') && name != "unknot" && name != "curl";
            CorpusEntry {
                name,
                diagram,
                prime,
                torus_2n,
                hopf_sum,
            }
        })
        .collect()
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
